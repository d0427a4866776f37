"""Write a probe-corpus fixture for a pair, for use with ``birat --probes``."""

import argparse
from dataclasses import dataclass, field

from birat.pairs import pair
from birat.probes import ProbeConfig, probe_corpus, save_probes


@dataclass(frozen=True)
class Config:
    vars: tuple[str, ...] = ("x", "y")
    relations: tuple[str, ...] = ()
    A_gens: tuple[str, ...] = ()
    out: str = "probes.json"
    probe: ProbeConfig = field(default_factory=ProbeConfig)


def main(cfg: Config) -> int:
    p = pair(list(cfg.vars), list(cfg.relations), list(cfg.A_gens))
    probes = probe_corpus(p, cfg.probe)
    save_probes(cfg.out, probes)
    return len(probes)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--vars", nargs="+", default=["x", "y"])
    ap.add_argument("--relations", nargs="*", default=[])
    ap.add_argument("--A-gens", nargs="*", default=[])
    ap.add_argument("--max-probes", type=int, default=48)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-retract", action="store_true")
    ap.add_argument("-o", "--out", default="probes.json")
    a = ap.parse_args()
    cfg = Config(tuple(a.vars), tuple(a.relations), tuple(a.A_gens), a.out,
                 ProbeConfig(max_probes=a.max_probes, seed=a.seed, retract=not a.no_retract))
    print(f"wrote {main(cfg)} probes to {cfg.out}")
