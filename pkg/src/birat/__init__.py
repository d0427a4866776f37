"""Exact computations with valuation spaces of pairs of rings.

Submodules: ``algebra`` (polynomials, Groebner bases), ``pairs``,
``valuations``, ``domains``, ``blowup``, ``probes``, ``serialize``, ``cli``.
"""

from .algebra import (
    GREVLEX,
    LEX,
    MonomialOrder,
    Poly,
    RingPresentation,
    buchberger,
    ctx,
    is_unit_ideal,
    localize,
    normal_form,
    parse,
    presentation,
    subalgebra_membership,
)
from .errors import BiratError, MalformedInput
from .pairs import MonomialPair, PairHom, PairOfRings, compose, identity, pair
from .valuations import ZERO, Composite, Localized, Pullback, Trivial, Weight

__version__ = "0.1.0"
