"""Rational domains ``X({a_1..a_n}/b)`` of ``Val(B, A)``: construction,
intersection, flattening of domains inside domains, refinement of covers
to rational coverings, and finite-cover sheaf checks for ``M`` and ``O``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    Localization,
    Poly,
    RingPresentation,
    is_unit_ideal,
    localize,
    monomials_up_to,
    solve_rational_system,
    subalgebra_membership,
    QQ,
)
from .errors import BiratError
from .pairs import PairOfRings, relative_normalization
from .valuations import ZERO, Localized, Valuation, vle


class DomainError(BiratError):
    code = "domain"


class NotACover(DomainError):
    code = "not_a_cover"


@dataclass(frozen=True, eq=False)
class RationalDomain:
    """``{v : ν(a_i) >= ν(b) for all i, ν(b) != ZERO}``."""

    pair: PairOfRings
    numerators: tuple[Poly, ...]
    denominator: Poly

    def __post_init__(self):
        B = self.pair.B
        nums = tuple(B.parse(a) if isinstance(a, str) else B.nf(a) for a in self.numerators)
        den = self.denominator
        den = B.parse(den) if isinstance(den, (str, int)) else B.nf(den)
        object.__setattr__(self, "numerators", nums)
        object.__setattr__(self, "denominator", den)

    def __repr__(self):
        return f"X({{{', '.join(map(str, self.numerators))}}}/{self.denominator})"

    def key(self):
        return (self.numerators, self.denominator)

    def validate(self) -> None:
        B = self.pair.B
        if not is_unit_ideal(list(self.numerators) + [self.denominator], B.relations):
            raise NotACover(f"{self!r}: numerators and denominator do not generate the unit ideal")
        if B.is_nilpotent(self.denominator):
            raise DomainError(f"{self!r}: nilpotent denominator (empty domain)")

    def localization(self) -> Localization:
        return localize(self.pair.B, self.denominator)


def domain(pair: PairOfRings, numerators, denominator) -> RationalDomain:
    return RationalDomain(pair, tuple(numerators), denominator)


@dataclass(frozen=True, eq=False)
class Covering:
    base: PairOfRings
    domains: tuple[RationalDomain, ...]
    refines: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.domains:
            raise DomainError("a covering needs at least one domain")
        for d in self.domains:
            if d.pair != self.base:
                raise DomainError("all domains of a covering live over the same pair")


def to_pair(d: RationalDomain, validate: bool = True) -> PairOfRings:
    """``(B_b, φ_b(A)[a_1/b, ..., a_n/b])``."""
    if validate:
        d.validate()
    L = d.localization()
    gens = [L.embed(a) for a in d.pair.A_gens]
    gens += [L.ring.nf(L.embed(a) * L.inverse) for a in d.numerators]
    gens = [g for g in gens if not g.is_constant()]
    return PairOfRings(L.ring, tuple(gens))


def membership(v: Valuation, d: RationalDomain) -> bool:
    vb = v.evaluate(d.denominator)
    if vb is ZERO:
        return False
    return all(vle(vb, v.evaluate(a)) for a in d.numerators)


def _dedupe(B: RingPresentation, polys):
    out, seen = [], set()
    for p in polys:
        p = B.nf(p)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _canon(polys):
    return tuple(sorted(polys, key=lambda p: (p.degree(), str(p))))


def intersect(d1: RationalDomain, d2: RationalDomain) -> RationalDomain:
    """Products ``a_i a'_j`` with the denominators prepended (``a_0 = b``)."""
    if d1.pair != d2.pair:
        raise DomainError("domains over different pairs")
    B = d1.pair.B
    l1 = [d1.denominator] + list(d1.numerators)
    l2 = [d2.denominator] + list(d2.numerators)
    den = B.nf(d1.denominator * d2.denominator)
    prods = _dedupe(B, [a * c for a in l1 for c in l2])
    return RationalDomain(d1.pair, _canon(prods), den)


# ---------------------------------------------------------------------------
# flattening
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlattenResult:
    domain: RationalDomain
    case: int


def _lift(L: Localization, h: Poly) -> tuple[Poly, int]:
    return L.clear(L.ring.nf(h))


def inner_condition(v: Valuation, outer: RationalDomain, numerators, denominator) -> bool:
    """Membership of the extension of ``v`` to ``B_b`` in the inner domain."""
    if not membership(v, outer):
        return False
    L = outer.localization()
    w = Localized(v, outer.denominator, L)
    return membership(w, RationalDomain(to_pair(outer, validate=False), tuple(numerators), denominator))


def flatten(outer: RationalDomain, numerators: Sequence[Poly], denominator: Poly) -> FlattenResult:
    """A single rational domain of ``(B, A)`` equal to the inner domain
    ``X'({h_j}/h_0)`` of ``to_pair(outer)``.

    Elements ``h`` of ``B_b`` are lifted to ``g ∈ B`` with ``h = g/b^k``.
    On the outer domain ``ν(b) <= 0``, which is what makes each case exact:

    1. ``b = 1`` and ``h_0 = 1``: join the numerator lists.
    2. inner ``{1}/h``: ``ν(g) <= k ν(b)`` is ``X({b^k, 1}/g)``.
    3. inner ``{h}/1``: ``ν(g) >= k ν(b)`` is ``X({g, 1}/b^k)``.
    4. general ``{h_j}/f``: pass to ``X'({1}/f)`` by case 2, then each
       ``ν(h_j) >= ν(f)`` becomes ``X({G_j, 1}/(b g_f)^m)`` with
       ``G_j = g_j b^(k_f + m - k_j) g_f^(m-1)`` and ``m = max(k_j, 1)``.
    """
    B = outer.pair.B
    L = outer.localization()
    R = L.ring
    nums = [R.parse(h) if isinstance(h, str) else R.nf(h) for h in numerators]
    den = R.parse(denominator) if isinstance(denominator, (str, int)) else R.nf(denominator)
    one = R.one()
    b = outer.denominator

    def dom(ns, d):
        return RationalDomain(outer.pair, tuple(ns), d)

    if den == one and b == B.one():
        lifted = [_lift(L, h)[0] for h in nums]
        allnums = _dedupe(B, list(outer.numerators) + lifted)
        return FlattenResult(dom(_canon(allnums), B.one()), 1)
    if den == one:
        out = outer
        for h in nums:
            g, k = _lift(L, h)
            out = intersect(out, dom((g, B.one()), B.nf(b ** k)))
        return FlattenResult(out, 3)
    gf, kf = _lift(L, den)
    step2 = intersect(outer, dom((B.nf(b ** kf), B.one()), gf))
    if all(h == one for h in nums) or not nums:
        return FlattenResult(step2, 2)
    out = step2
    for h in nums:
        gj, kj = _lift(L, h)
        m = max(kj, 1)
        G = B.nf(gj * b ** (kf + m - kj) * gf ** (m - 1))
        out = intersect(out, dom((G, B.one()), B.nf((b * gf) ** m)))
    return FlattenResult(out, 4)


# ---------------------------------------------------------------------------
# rational coverings
# ---------------------------------------------------------------------------


def rational_covering(pair: PairOfRings, T: Sequence[Poly]) -> Covering:
    """``{X(T/t) : t ∈ T}`` for a unit-ideal set ``T``."""
    B = pair.B
    T = [B.parse(t) if isinstance(t, str) else B.nf(t) for t in T]
    return Covering(pair, tuple(RationalDomain(pair, tuple(T), t) for t in T))


@dataclass(frozen=True)
class Refinement:
    covering: Covering
    index: tuple[tuple[int, ...], ...]
    assignment: tuple[int, ...]
    generators: tuple[Poly, ...]


def refine_cover(c: Covering, check_unit: bool = True) -> Refinement:
    """Refine a cover by rational domains to a rational covering.

    With ``list_i = [b_i] + numerators_i`` (positions from 1, the
    denominator at 1), ``I`` is the product of index ranges, ``I'`` the
    tuples using some denominator, ``a_r`` the product of the selected
    entries. The output domains are ``X({a_s : s ∈ I'}/a_r)`` for ``r ∈ I'``
    and ``r`` is assigned to the first ``i`` with ``r_i = 1``.
    """
    B = c.base.B
    lists = []
    for d in c.domains:
        rest = [a for a in d.numerators if not B.equal(a, d.denominator)]
        lists.append([d.denominator] + rest)
    full = itertools.product(*[range(1, len(lst) + 1) for lst in lists])
    Iprime = [r for r in full if 1 in r]
    prods = []
    for r in Iprime:
        p = B.one()
        for lst, k in zip(lists, r):
            p = p * lst[k - 1]
        prods.append(B.nf(p))
    if check_unit and not is_unit_ideal(prods, B.relations):
        raise NotACover("the products do not generate the unit ideal: the input is not a cover")
    T = _dedupe(B, prods)
    doms = []
    keep_index = []
    assignment = []
    seen = set()
    for r, a in zip(Iprime, prods):
        if a in seen:
            continue
        seen.add(a)
        doms.append(RationalDomain(c.base, tuple(T), a))
        keep_index.append(r)
        assignment.append(r.index(1))
    cov = Covering(c.base, tuple(doms), tuple(assignment))
    return Refinement(cov, tuple(keep_index), tuple(assignment), tuple(T))


def uncovered(c: Covering, probes: Sequence[Valuation]) -> list[Valuation]:
    return [v for v in probes if not any(membership(v, d) for d in c.domains)]


# ---------------------------------------------------------------------------
# sheaves M and O
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SheafSections:
    domain: RationalDomain
    M_ring: RingPresentation
    O_gens: tuple[Poly, ...]
    localization: Localization = field(repr=False, default=None)


def sheaf_sections(d: RationalDomain, degree_bound: int = 2) -> SheafSections:
    P = to_pair(d, validate=False)
    nor = relative_normalization(P, degree_bound)
    return SheafSections(d, P.B, nor.A_gens, d.localization())


@dataclass(frozen=True)
class Mismatch:
    pair: tuple[int, int]
    witness: Poly

    ok = False


@dataclass(frozen=True)
class Glued:
    section: Poly | None
    in_O: bool
    O_members: tuple[bool, ...] = ()

    ok = True


def restrict_section(L_from: Localization, s: Poly, L_to: Localization, extra: Poly) -> Poly:
    """Image of ``s ∈ B_b`` in ``B_{b c}`` (``extra = c``): ``1/b ↦ c/(b c)``."""
    R = L_to.ring
    n = len(L_from.base.ctx)
    images = [L_to.embed(x) for x in L_from.base.vars()]
    if L_from.new_var is not None:
        images.append(R.nf(L_to.embed(extra) * L_to.inverse))
    return R.nf(s.subs(images, R.ctx)) if images else R.nf(s)


def sheaf_equalizer_check(c: Covering, sections: Sequence[Poly], degree_bound: int = 2,
                          O_gens: Sequence[Poly] | None = None):
    """Check compatibility on overlaps, glue in ``B`` and test ``O``-membership.

    ``sections[i]`` lives in ``B_{b_i}`` (as a polynomial in the localized
    presentation). The glued section is searched among polynomials of
    degree ``<= degree_bound`` in the variables of ``B``.
    """
    B = c.base.B
    locs = [d.localization() for d in c.domains]
    secs = []
    for L, s in zip(locs, sections):
        s = L.ring.parse(s) if isinstance(s, (str, int)) else L.ring.nf(s)
        secs.append(s)
    for i, j in itertools.combinations(range(len(c.domains)), 2):
        bi, bj = c.domains[i].denominator, c.domains[j].denominator
        Lij = localize(B, B.nf(bi * bj))
        si = restrict_section(locs[i], secs[i], Lij, bj)
        sj = restrict_section(locs[j], secs[j], Lij, bi)
        diff = Lij.ring.nf(si - sj)
        if not diff.is_zero():
            return Mismatch((i, j), diff)
    monos = [Poly.monomial(B.ctx, e) for e in monomials_up_to(len(B.ctx), degree_bound)]
    monos = _dedupe(B, monos)
    rows_by_key: dict = {}
    nrows = []
    for L, s in zip(locs, secs):
        imgs = [L.embed(m) for m in monos]
        keys = sorted({e for p in imgs + [s] for e in p.terms})
        for e in keys:
            nrows.append([QQ(p.terms.get(e, 0)) for p in imgs] + [QQ(s.terms.get(e, 0))])
    sol = solve_rational_system(nrows, len(monos))
    if sol is None:
        return Glued(None, False)
    glued = B.nf(sum((m.scale(c_) for m, c_ in zip(monos, sol) if c_), B.const(0)))
    if O_gens is None:
        O_gens = relative_normalization(c.base, degree_bound).A_gens
    in_O = bool(subalgebra_membership(glued, O_gens, B.relations))
    return Glued(glued, in_O)


def section_in_O(sec: SheafSections, s: Poly) -> bool:
    return bool(subalgebra_membership(sec.M_ring.nf(s), sec.O_gens, sec.M_ring.relations))
