"""Relative blow ups of affine pairs, chart by chart.

For a finite ``A``-module ``E ⊆ B`` containing 1 with generators
``b_0..b_n`` generating the unit ideal, the blow up is covered by the
charts ``(B_{b_i}, A[b_0/b_i, ..., b_n/b_i])``; the Proj itself is never
built.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    Localization,
    Poly,
    is_unit_ideal,
    localize,
    solve_linear_combination,
    subalgebra_membership,
    unit_inverse,
)
from .domains import RationalDomain, membership
from .errors import BiratError
from .pairs import (
    MonomialPair,
    PairHom,
    PairOfRings,
    compose,
    relative_normalization,
    saturate,
)


class BlowupError(BiratError):
    code = "blowup"


class NotInvertible(BlowupError):
    code = "not_invertible"


def _prune(B, polys):
    out, seen = [], set()
    for p in polys:
        p = B.nf(p)
        if not p.is_zero() and p not in seen:
            seen.add(p)
            out.append(p)
    return out


@dataclass(frozen=True, eq=False)
class ModuleE:
    pair: PairOfRings
    gens: tuple[Poly, ...]
    check: bool = True

    def __post_init__(self):
        B = self.pair.B
        gens = tuple(_prune(B, [B.parse(g) if isinstance(g, (str, int)) else g for g in self.gens]))
        object.__setattr__(self, "gens", gens)
        if self.check:
            if solve_linear_combination(list(gens), B.one()) is None:
                raise BlowupError("1 is not a QQ-combination of the generators")
            if not is_unit_ideal(list(gens), B.relations):
                raise BlowupError("generators do not generate the unit ideal")

    def __repr__(self):
        return f"E{{{', '.join(map(str, self.gens))}}}"

    def same_gens(self, other: "ModuleE") -> bool:
        return set(self.gens) == set(other.gens)


def power(E: ModuleE, d: int) -> ModuleE:
    if d < 0:
        raise BlowupError("negative power")
    B = E.pair.B
    if d == 0:
        return ModuleE(E.pair, (B.one(),), False)
    prods = []
    for combo in itertools.combinations_with_replacement(E.gens, d):
        p = B.one()
        for g in combo:
            p = p * g
        prods.append(p)
    return ModuleE(E.pair, tuple(sorted(_prune(B, prods), key=lambda p: (p.degree(), str(p)))), False)


def compose_modules(E1: ModuleE, E2: ModuleE) -> ModuleE:
    if E1.pair != E2.pair:
        raise BlowupError("modules over different pairs")
    B = E1.pair.B
    prods = [a * b for a in E1.gens for b in E2.gens]
    return ModuleE(E1.pair, tuple(sorted(_prune(B, prods), key=lambda p: (p.degree(), str(p)))), False)


@dataclass(frozen=True, eq=False)
class Chart:
    index: int
    generator: Poly
    pair: PairOfRings
    loc: Localization
    inclusion: PairHom

    def __repr__(self):
        return f"Chart({self.index}: 1/({self.generator}), A={list(map(str, self.pair.A_gens))})"


def _chart_gens(E: ModuleE, L: Localization):
    R = L.ring
    gens = [L.embed(a) for a in E.pair.A_gens]
    gens += [R.nf(L.embed(b) * L.inverse) for b in E.gens]
    return [g for g in gens if not g.is_constant()]


def charts(E: ModuleE) -> list[Chart]:
    B = E.pair.B
    if not is_unit_ideal(list(E.gens), B.relations):
        raise BlowupError("generators do not generate the unit ideal")
    out = []
    for i, b in enumerate(E.gens):
        if B.is_nilpotent(b):
            continue
        L = localize(B, b)
        P = PairOfRings(L.ring, tuple(_chart_gens(E, L)))
        inc = PairHom(E.pair, P, tuple(L.embed(x) for x in B.vars()), False)
        out.append(Chart(i, b, P, L, inc))
    return out


def chart_domain(E: ModuleE, c: Chart) -> RationalDomain:
    return RationalDomain(E.pair, E.gens, c.generator)


def inverse_image_module(h: PairHom, E: ModuleE) -> ModuleE:
    """``E`` lives on ``h.source`` (the base of the blow up); its inverse image
    is generated over ``A'`` by the images ``h(b_i)`` in ``B'``."""
    if E.pair != h.source:
        raise BlowupError("E must live on the source pair of the homomorphism")
    B2 = h.target.B
    return ModuleE(h.target, tuple(_prune(B2, [h(b) for b in E.gens])), False)


@dataclass(frozen=True)
class Principality:
    principal: bool
    generator_index: int | None = None
    inverse: Poly | None = None


def is_principal(E: ModuleE) -> Principality:
    """Is some generator ``e`` a unit of ``B`` with every ``e_j/e ∈ A``?"""
    P = E.pair
    B = P.B
    for i, e in enumerate(E.gens):
        inv = unit_inverse(e, B.relations)
        if inv is None:
            continue
        if all(P.in_A(B.nf(g * inv)) for g in E.gens):
            return Principality(True, i, inv)
    return Principality(False)


def is_invertible_on_chart(E: ModuleE, c: Chart) -> bool:
    """Every ``b_j / b_i`` lies in ``A_i``, i.e. ``E A_i = b_i A_i``."""
    R = c.pair.B
    for b in E.gens:
        q = R.nf(c.loc.embed(b) * c.loc.inverse)
        if not subalgebra_membership(q, c.pair.A_gens, R.relations):
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    chart: Chart
    hom: PairHom
    candidates: tuple[int, ...]


def universal_factorization(h: PairHom, E: ModuleE, chart_list: Sequence[Chart] | None = None) -> Factorization:
    """Factor ``h: (B, A) -> (B', A')`` through a chart of the blow up of ``E``.

    Chart ``i`` applies when ``h(b_i)`` is a unit of ``B'`` with every
    ``h(b_j)/h(b_i) ∈ A'``; the factor sends the inverse of ``b_i`` to the
    inverse of ``h(b_i)``. Every applicable chart is tried and each factor
    is checked to reproduce ``h`` after the chart inclusion.
    """
    if chart_list is None:
        chart_list = charts(E)
    B2 = h.target.B
    found = []
    for c in chart_list:
        hb = h(c.generator)
        inv = unit_inverse(hb, B2.relations)
        if inv is None:
            continue
        if not all(h.target.in_A(B2.nf(h(b) * inv)) for b in E.gens):
            continue
        images = list(h.images)
        if c.loc.new_var is not None:
            images.append(inv)
        g = PairHom(c.pair, h.target, tuple(images), True)
        back = compose(g, c.inclusion)
        if back.images != h.images:
            raise BlowupError("factorization does not reproduce h")
        found.append((c, g))
    if not found:
        raise NotInvertible("not invertible: the inverse image of E is not principal")
    c, g = found[0]
    return Factorization(c, g, tuple(cc.index for cc, _ in found))


# ---------------------------------------------------------------------------
# normalization and blow up
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NorComparison:
    agree: bool
    witness: object = None


def _chart_pair(P: PairOfRings, gens, i) -> tuple[PairOfRings, Localization]:
    B = P.B
    L = localize(B, gens[i])
    A = [L.embed(a) for a in P.A_gens] + [L.ring.nf(L.embed(b) * L.inverse) for b in gens]
    return PairOfRings(L.ring, tuple(a for a in A if not a.is_constant())), L


def nor_blowup_commutes(p, E_gens: Sequence, degree_bound: int = 2) -> NorComparison:
    """Compare, chart by chart, ``Nor(A[E/b_i])`` with ``Nor(Nor(A)[E/b_i])``.

    For a :class:`MonomialPair` the module generators are lattice vectors;
    both sides are then computed by exact saturation, the chart at ``m_i``
    adding ``-m_i`` to ``M`` and ``m_j - m_i`` to ``N``.
    """
    if isinstance(p, MonomialPair):
        return _nor_blowup_monomial(p, [tuple(v) for v in E_gens], degree_bound)
    B = p.B
    gens = _prune(B, [B.parse(g) if isinstance(g, (str, int)) else g for g in E_gens])
    norA = relative_normalization(p, degree_bound)
    for i, b in enumerate(gens):
        if B.is_nilpotent(b):
            continue
        side1, _ = _chart_pair(p, gens, i)
        side1 = relative_normalization(side1, degree_bound)
        side2, _ = _chart_pair(norA, gens, i)
        side2 = relative_normalization(side2, degree_bound)
        for a in side1.A_gens:
            if not side2.in_A(a):
                return NorComparison(False, (i, a))
        for a in side2.A_gens:
            if not side1.in_A(a):
                return NorComparison(False, (i, a))
    return NorComparison(True)


def _nor_blowup_monomial(mp: MonomialPair, E, box: int) -> NorComparison:
    nor = saturate(mp, box)
    zero = (0,) * mp.rank
    if zero not in E:
        raise BlowupError("the module must contain the monomial 1")
    for i, mi in enumerate(E):
        neg = tuple(-x for x in mi)
        M2 = tuple(mp.M_gens) + ((neg,) if any(mi) else ())
        ratios = tuple(tuple(a - b for a, b in zip(mj, mi)) for mj in E)
        side1 = saturate(MonomialPair(mp.rank, M2, tuple(mp.N_gens) + ratios, mp.search_bound), box)
        side2 = saturate(
            MonomialPair(mp.rank, M2, tuple(mp.N_gens) + tuple(nor.generators) + ratios, mp.search_bound),
            box,
        )
        s1, s2 = set(side1.generators), set(side2.generators)
        if not (_generates(s1, s2, mp.rank, box) and _generates(s2, s1, mp.rank, box)):
            return NorComparison(False, (i, sorted(s1 ^ s2)))
    return NorComparison(True)


def _generates(gens, targets, rank, box) -> bool:
    from .pairs import express_in_semigroup
    gens = list(gens)
    return all(express_in_semigroup(t, gens, box * 2) is not None for t in targets)


def chart_coverage(E: ModuleE, probes, chart_list: Sequence[Chart] | None = None):
    """Probes outside every chart domain ``X(E/b_i)``."""
    if chart_list is None:
        chart_list = charts(E)
    doms = [chart_domain(E, c) for c in chart_list]
    return [v for v in probes if not any(membership(v, d) for d in doms)]
