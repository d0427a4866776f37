"""Finite probe corpora of concrete valuations.

Set-level statements (coverage, equality of rational domains) are checked
pointwise on these. A corpus for a pair ``(B, A)`` is built from

* linear primes ``p``: ideals ``I + (x_i - c_i)`` whose reduced basis is
  linear, so ``B/p`` is a polynomial ring in the non-leading variables;
  each such prime carries its trivial valuation and Gauss valuations pulled
  back along ``B -> B/p = QQ[free variables]``;
* Gauss valuations on ``B`` itself when ``B`` is flagged as a domain and
  its relations are homogeneous for the weight.

Only ``A``-valuations are kept, optionally retracted into ``Val``.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass

from .algebra import Poly, RingPresentation, VarContext, ideal_gb, presentation
from .pairs import PairOfRings, RingMap
from .valuations import (
    ZERO,
    Pullback,
    Trivial,
    Valuation,
    ValuationError,
    Weight,
    is_A_valuation,
    is_weight_homogeneous,
    retract,
)


@dataclass(frozen=True)
class ProbeConfig:
    points: tuple[int, ...] = (0, 1, -1)
    weight_range: int = 2
    rank2_samples: int = 4
    max_per_prime: int = 12
    max_probes: int = 48
    seed: int = 0
    retract: bool = True


def linear_primes(B: RingPresentation, points=(0, 1, -1)) -> list[tuple[Poly, ...]]:
    """Primes ``(x_i - c_i : i ∈ S)`` of ``B`` with linear reduced basis;
    the zero ideal comes first when ``B`` itself is linear."""
    out = []
    seen = set()
    n = len(B.ctx)
    xs = B.vars()
    cands = [()]
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            for cs in itertools.product(points, repeat=size):
                cands.append(tuple(xs[i] - c for i, c in zip(S, cs)))
    for gens in cands:
        gb = ideal_gb(B, gens)
        if gb.is_unit or any(p.degree() > 1 for p in gb):
            continue
        if not gens and B.domain is False:
            continue
        key = gb.polys
        if key in seen:
            continue
        seen.add(key)
        out.append(tuple(B.nf(g) for g in gens))
    return out


def parametrization(B: RingPresentation, prime) -> RingMap:
    """``B -> B/p ≅ QQ[free]`` for a linear prime ``p``."""
    gb = ideal_gb(B, prime)
    leads = {i for g in gb for i, k in enumerate(g.lead()[0]) if k}
    free = [i for i in range(len(B.ctx)) if i not in leads]
    names = tuple(B.ctx.names[i] for i in free) or ()
    F = presentation(VarContext(names))
    images = []
    for x in B.vars():
        r = gb.reduce(x)
        images.append(r.restrict(F.ctx, free) if free else Poly.const(F.ctx, r.constant_value()))
    return RingMap(B, F, tuple(images), True)


def weight_vectors(d: int, cfg: ProbeConfig, rng: random.Random):
    R = cfg.weight_range
    rank1 = [tuple((x,) for x in w) for w in itertools.product(range(-R, R + 1), repeat=d) if any(w)]
    rng.shuffle(rank1)
    rank1 = rank1[: max(cfg.max_per_prime - cfg.rank2_samples, 1)]
    rank2 = []
    for _ in range(cfg.rank2_samples if d else 0):
        rank2.append(tuple((rng.randint(-R, R), rng.randint(-R, R)) for _ in range(d)))
    return rank1 + rank2


def _signature(v: Valuation, p: PairOfRings):
    vals = []
    for f in p.B.vars() + list(p.A_gens):
        x = v.evaluate(f)
        vals.append(x if x is ZERO or any(x) else 0)
    return (v.kernel_gb.polys, tuple(vals))


def probe_corpus(p: PairOfRings, cfg: ProbeConfig = ProbeConfig()) -> list[Valuation]:
    rng = random.Random(cfg.seed)
    B = p.B
    cands: list[Valuation] = []
    for prime in linear_primes(B, cfg.points):
        cands.append(Trivial(B, prime))
        par = parametrization(B, prime)
        d = len(par.target.ctx)
        for w in weight_vectors(d, cfg, rng):
            if par.images == tuple(B.vars()) and par.target.ctx == B.ctx:
                cands.append(Weight(B, w))
            else:
                cands.append(Pullback(par, Weight(par.target, w)))
    if B.domain and any(g.degree() > 1 for g in B.relations):
        n = len(B.ctx)
        grid = list(itertools.product(range(-cfg.weight_range, cfg.weight_range + 1), repeat=n))
        rng.shuffle(grid)
        taken = 0
        for w in grid:
            ws = tuple((x,) for x in w)
            if not any(w) or not all(is_weight_homogeneous(g, ws) for g in B.relations):
                continue
            try:
                cands.append(Weight(B, ws))
            except ValuationError:
                continue
            taken += 1
            if taken >= cfg.max_per_prime:
                break
        cands.append(Trivial(B, ()))
    out = []
    seen = set()
    for v in cands:
        if not is_A_valuation(v, p):
            continue
        if cfg.retract:
            v = retract(v, p)
        sig = _signature(v, p)
        if sig in seen:
            continue
        seen.add(sig)
        out.append(v)
    if len(out) > cfg.max_probes:
        # keep every trivial probe, sample the rest deterministically
        triv = [v for v in out if isinstance(v, Trivial)]
        rest = [v for v in out if not isinstance(v, Trivial)]
        rng.shuffle(rest)
        out = triv[: cfg.max_probes // 2] + rest[: cfg.max_probes - min(len(triv), cfg.max_probes // 2)]
    return out


def save_probes(path, probes) -> None:
    from .serialize import valuation_to_json
    with open(path, "w") as fh:
        json.dump([valuation_to_json(v) for v in probes], fh, indent=1, sort_keys=True)


def load_probes(path) -> list[Valuation]:
    from .serialize import valuation_from_json
    with open(path) as fh:
        data = json.load(fh)
    return [valuation_from_json(d) for d in data]
