"""Walk through the open immersion Spec QQ[T, 1/T] -> Spec QQ[T] on valuations.

The T-adic valuation on QQ[T, 1/T] is an A'-valuation for A' = QQ[T], but its
pullback to (QQ[T], QQ[T]) takes T to a positive value while 1/T is allowed,
so it is not in Val; its retraction is the trivial valuation at (T).
"""

import argparse
import json
from dataclasses import dataclass

from birat import serialize as S
from birat.algebra import localize
from birat.pairs import PairHom, PairOfRings, is_adic, pair
from birat.valuations import Localized, Weight, bir_map, cgamma_level, in_Val, pullback


@dataclass(frozen=True)
class Config:
    weight: int = 1
    samples: tuple[str, ...] = ("T", "T^2 + T", "T + 1")


def main(cfg: Config) -> dict:
    p = pair(["T"], [], ["T"])
    L = localize(p.B, p.B.parse("T"))
    T = L.embed(p.B.parse("T"))
    tgt = PairOfRings(L.ring, (T,))
    h = PairHom(p, tgt, (T,))
    v = Localized(Weight(p.B, ((cfg.weight,),)), p.B.parse("T"), L)
    w = pullback(h, v)
    r = bir_map(h, v)
    adic = is_adic(h)
    return {
        "v_in_Val_target": in_Val(v, tgt),
        "pullback_values": {f: S.value_to_json(w.evaluate(p.B.parse(f))) for f in cfg.samples},
        "pullback_in_Val": in_Val(w, p),
        "pullback_level": cgamma_level(w, p),
        "bir_map": S.valuation_to_json(r),
        "bir_map_kernel": [str(k) for k in r.kernel()],
        "is_adic": adic.status,
    }


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--weight", type=int, default=1)
    args = ap.parse_args()
    print(json.dumps(main(Config(weight=args.weight)), indent=2, sort_keys=True))
