"""Charts of relative blow-ups of random modules E = <1, e_1, ..., e_k> over QQ[x, y].

For each module we list the charts, check that E becomes principal on each,
and factor every chart inclusion through the blow-up.
"""

import argparse
import json
import random
import time
from dataclasses import dataclass

from birat.blowup import ModuleE, charts, is_invertible_on_chart, universal_factorization
from birat.pairs import pair


@dataclass(frozen=True)
class Config:
    modules: int = 10
    extra_gens: int = 2
    degree: int = 2
    seed: int = 0


def main(cfg: Config) -> dict:
    rng = random.Random(cfg.seed)
    p = pair(["x", "y"], [], [])
    B = p.B
    rows = []
    for _ in range(cfg.modules):
        gens = [B.one()]
        while len(gens) < cfg.extra_gens + 1:
            a, b = rng.randint(0, cfg.degree), rng.randint(0, cfg.degree)
            g = B.parse(f"{rng.choice([1, 2, -1])}*x^{a}*y^{b} + {rng.randint(-2, 2)}")
            if not g.is_constant():
                gens.append(g)
        E = ModuleE(p, tuple(gens))
        t0 = time.perf_counter()
        cl = charts(E)
        ok = all(is_invertible_on_chart(E, c) for c in cl)
        fac = all(c.index in universal_factorization(c.inclusion, E, cl).candidates for c in cl)
        rows.append({"E": [str(g) for g in gens], "charts": len(cl), "invertible": ok,
                     "factor": fac, "seconds": round(time.perf_counter() - t0, 3)})
    return {"config": cfg.__dict__, "modules": rows}


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--modules", type=int, default=10)
    ap.add_argument("--extra-gens", type=int, default=2)
    ap.add_argument("--degree", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    print(json.dumps(main(Config(a.modules, a.extra_gens, a.degree, a.seed)), indent=2))
