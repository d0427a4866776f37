class BiratError(Exception):
    """Base class for every error raised by the library.

    ``code`` is a short machine-readable tag surfaced by the CLI.
    """

    code = "error"


class MalformedInput(BiratError, ValueError):
    code = "malformed"
