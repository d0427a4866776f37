"""Pairs of rings ``(B, A)``, their homomorphisms, adicness and relative
normalization.

``A`` is always given by generators inside ``B``; equality of subrings is
mutual subalgebra membership of generator lists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    GREVLEX,
    QQ,
    AlgebraError,
    MonomialOrder,
    Poly,
    RingPresentation,
    VarContext,
    buchberger,
    internal_context,
    monomials_up_to,
    presentation,
    solve_rational_system,
    subalgebra_membership,
    tag_context,
)
from .errors import BiratError


class PairError(BiratError):
    code = "pair"


class HomError(PairError):
    code = "hom"


# ---------------------------------------------------------------------------
# pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PairOfRings:
    """A ring ``B`` and the subring ``A`` generated over QQ by ``A_gens``.

    ``bounded`` marks pairs produced by the bounded normalization search.
    """

    B: RingPresentation
    A_gens: tuple[Poly, ...] = ()
    bounded: bool = False

    def __post_init__(self):
        gens = []
        seen = set()
        for g in self.A_gens:
            if isinstance(g, str):
                g = self.B.parse(g)
            if g.ctx != self.B.ctx:
                raise PairError("A generator lives in a different context")
            g = self.B.nf(g)
            if g not in seen:
                seen.add(g)
                gens.append(g)
        object.__setattr__(self, "A_gens", tuple(gens))

    def __eq__(self, other):
        return (
            isinstance(other, PairOfRings)
            and self.B == other.B
            and self.A_gens == other.A_gens
        )

    def __hash__(self):
        return hash((self.B, self.A_gens))

    def __repr__(self):
        return f"PairOfRings({self.B!r}, A=QQ[{', '.join(map(str, self.A_gens))}])"

    @property
    def ctx(self) -> VarContext:
        return self.B.ctx

    def in_A(self, f: Poly):
        return subalgebra_membership(self.B.nf(f), self.A_gens, self.B.relations)

    def same_A(self, other_gens: Sequence[Poly]) -> bool:
        """Mutual subalgebra membership of the two generator lists."""
        other = PairOfRings(self.B, tuple(other_gens))
        return all(other.in_A(a) for a in self.A_gens) and all(
            self.in_A(a) for a in other.A_gens
        )


def pair(names, relations=(), A_gens=(), domain=None) -> PairOfRings:
    B = presentation(names, relations, domain)
    return PairOfRings(B, tuple(B.parse(a) if isinstance(a, str) else a for a in A_gens))


def full_pair(B: RingPresentation) -> PairOfRings:
    """The pair ``(B, B)``."""
    return PairOfRings(B, tuple(B.vars()))


@dataclass(frozen=True)
class Diagnostics:
    ok: bool
    messages: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


def validate_pair(p: PairOfRings) -> Diagnostics:
    msgs = []
    if p.B.relations.is_unit:
        msgs.append("zero ring")
    for g in p.A_gens:
        if g.ctx != p.B.ctx:
            msgs.append(f"generator {g} in wrong context")
        elif not p.B.nf(g) == g:
            msgs.append(f"generator {g} not in normal form")
    return Diagnostics(not msgs, tuple(msgs))


def A_presentation(p: PairOfRings) -> RingPresentation:
    """``A`` as ``QQ[y1..ym]/J`` with ``J`` the kernel of ``y_k -> a_k``."""
    m = len(p.A_gens)
    tags = tag_context(m)
    kernel = ring_map_kernel(p.B, p.A_gens, tags)
    return presentation(tags, kernel)


# ---------------------------------------------------------------------------
# ring maps and homomorphisms of pairs
# ---------------------------------------------------------------------------


def ring_map_kernel(target: RingPresentation, images: Sequence[Poly],
                    source: VarContext, extra: Sequence[Poly] = ()) -> list[Poly]:
    """Generators of the kernel of ``QQ[source] -> target/(extra)`` sending the
    i-th variable to ``images[i]``, as polynomials over ``source``."""
    n, m = len(target.ctx), len(source)
    big = internal_context(n + m)
    tpos = list(range(n))
    spos = list(range(n, n + m))
    gens = [g.embed(big, tpos) for g in target.relations]
    gens += [g.embed(big, tpos) for g in extra if g]
    for i, img in enumerate(images):
        gens.append(Poly.var(big, n + i) - img.embed(big, tpos))
    if not gens:
        return []
    order = MonomialOrder.elimination(n, n + m)
    gb = buchberger(gens, order, big)
    out = []
    for g in gb:
        if all(not any(e[:n]) for e in g.terms):
            out.append(g.restrict(source, spos))
    return out


@dataclass(frozen=True, eq=False)
class RingMap:
    """QQ-algebra map ``source -> target`` given by images of variables."""

    source: RingPresentation
    target: RingPresentation
    images: tuple[Poly, ...]
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        if len(self.images) != len(self.source.ctx):
            raise HomError("one image per source variable is required")
        imgs = []
        for g in self.images:
            if isinstance(g, str):
                g = self.target.parse(g)
            if g.ctx != self.target.ctx:
                raise HomError("image lives in a different context")
            imgs.append(self.target.nf(g))
        object.__setattr__(self, "images", tuple(imgs))
        if self.check:
            for rel in self.source.relations:
                if not self(rel).is_zero():
                    raise HomError(f"relation {rel} does not map to 0")

    def __call__(self, f: Poly) -> Poly:
        if f.ctx != self.source.ctx:
            raise HomError("argument lives in a different context")
        return self.target.nf(f.subs(self.images, self.target.ctx))

    def __eq__(self, other):
        return (
            isinstance(other, RingMap)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def then(self, other: "RingMap") -> "RingMap":
        """``other ∘ self``."""
        if self.target != other.source:
            raise HomError("maps are not composable")
        return RingMap(self.source, other.target, tuple(other(g) for g in self.images), False)

    def kernel(self) -> list[Poly]:
        gens = ring_map_kernel(self.target, self.images, self.source.ctx)
        gb = buchberger(list(self.source.relations) + gens, GREVLEX, self.source.ctx)
        return [g for g in gb if not self.source.nf(g).is_zero()]


def identity_map(B: RingPresentation) -> RingMap:
    return RingMap(B, B, tuple(B.vars()), False)


@dataclass(frozen=True, eq=False)
class PairHom:
    """Homomorphism of pairs: a ring map ``B -> B'`` with ``φ(A) ⊆ A'``."""

    source: PairOfRings
    target: PairOfRings
    images: tuple[Poly, ...]
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        rm = RingMap(self.source.B, self.target.B, tuple(self.images), self.check)
        object.__setattr__(self, "images", rm.images)
        object.__setattr__(self, "ring_map", rm)
        if self.check:
            for a in self.source.A_gens:
                img = rm(a)
                if not self.target.in_A(img):
                    raise HomError(f"image of A generator {a} is {img}, not in A'")

    def __call__(self, f: Poly) -> Poly:
        return self.ring_map(f)

    def __eq__(self, other):
        return (
            isinstance(other, PairHom)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def __repr__(self):
        m = ", ".join(f"{n}->{g}" for n, g in zip(self.source.ctx.names, self.images))
        return f"PairHom({m})"


def identity(p: PairOfRings) -> PairHom:
    return PairHom(p, p, tuple(p.B.vars()), False)


def compose(g: PairHom, f: PairHom) -> PairHom:
    """``g ∘ f`` (apply ``f`` first)."""
    if f.target != g.source:
        raise HomError("target of f differs from source of g")
    return PairHom(f.source, g.target, tuple(g(x) for x in f.images), False)


# ---------------------------------------------------------------------------
# integrality and adicness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegralResult:
    integral: bool
    relation: Poly | None = None
    degree: int | None = None
    bound: int | None = None

    def __bool__(self):
        return self.integral


def integral_element_test(f: Poly, over: PairOfRings, degree_bound: int | None = 8) -> IntegralResult:
    """Look for a monic relation ``z^n + c_{n-1} z^{n-1} + ... + c_0`` of ``f``
    over ``A``.

    The relation ideal of ``(z, y) -> (f, a)`` is computed with a block order
    eliminating the ``B`` variables and putting ``z`` above the tags ``y``;
    ``f`` is integral exactly when that basis has an element with leading
    monomial a pure power of ``z``. The relation is returned over
    ``QQ[z, y1..ym]``.
    """
    B = over.B
    f = B.nf(f)
    m = len(over.A_gens)
    rel_ctx = VarContext(("z",) + tag_context(m).names)
    quick = subalgebra_membership(f, over.A_gens, B.relations) if f.is_constant() else None
    if quick:
        rel = Poly.var(rel_ctx, 0) - f.constant_value()
        return IntegralResult(True, rel, 1, degree_bound)
    n = len(B.ctx)
    big = internal_context(n + 1 + m)
    xs = list(range(n))
    gens = [g.embed(big, xs) for g in B.relations]
    gens.append(Poly.var(big, n) - f.embed(big, xs))
    for k, a in enumerate(over.A_gens):
        gens.append(Poly.var(big, n + 1 + k) - a.embed(big, xs))
    order = MonomialOrder("block", (n, 1, m) if m else (n, 1))
    gb = buchberger(gens, order, big)
    best = None
    for g, lm in zip(gb.polys, gb.leading_monomials()):
        if any(lm[:n]) or any(lm[n + 1:]) or lm[n] == 0:
            continue
        if any(any(e[:n]) for e in g.terms):
            continue
        if best is None or lm[n] < best[0]:
            best = (lm[n], g)
    if best is None:
        return IntegralResult(False, None, None, degree_bound)
    deg, g = best
    if degree_bound is not None and deg > degree_bound:
        return IntegralResult(False, None, None, degree_bound)
    rel = g.restrict(rel_ctx, list(range(n, n + 1 + m)))
    return IntegralResult(True, rel, deg, degree_bound)


@dataclass(frozen=True)
class AdicResult:
    status: str  # "adic" | "not_adic" | "unknown"
    witness: object = None
    bound: int | None = None
    relations: tuple = ()

    def __bool__(self):
        return self.status == "adic"


def is_adic(f: PairHom, degree_bound: int = 8, probes=None) -> AdicResult:
    """Decide whether ``B ⊗_A A' -> B'`` is integral.

    The image of ``B ⊗_A A'`` is the subring generated by ``φ(B)`` and
    ``A'``, so it suffices that every target variable be integral over it.
    A negative answer is only certified by a probe valuation of the target
    whose pullback leaves ``Val`` of the source.
    """
    tgt = f.target
    over = PairOfRings(tgt.B, tuple(f.images) + tgt.A_gens)
    rels = []
    failed = False
    for x in tgt.B.vars():
        res = integral_element_test(x, over, degree_bound)
        if not res:
            failed = True
            break
        rels.append(res.relation)
    if not failed:
        return AdicResult("adic", None, degree_bound, tuple(rels))
    from . import valuations as V
    if probes is None:
        from .probes import probe_corpus
        probes = probe_corpus(tgt)
    for v in probes:
        if not V.is_A_valuation(v, tgt) or not V.in_Val(v, tgt):
            continue
        w = V.pullback(f, v)
        if not V.in_Val(w, f.source):
            return AdicResult("not_adic", v, degree_bound)
    return AdicResult("unknown", None, degree_bound)


# ---------------------------------------------------------------------------
# relative normalization
# ---------------------------------------------------------------------------


def relative_normalization(p, degree_bound: int = 3) -> PairOfRings:
    """``(B, Nor_B A)``.

    Monomial pairs are handled exactly (semigroup saturation). General pairs
    get every monomial in the variables of ``B`` up to ``degree_bound`` that
    is integral over ``A``; the result is flagged ``bounded``.
    """
    if isinstance(p, MonomialPair):
        sat = saturate(p, degree_bound)
        return sat.to_pair()
    B = p.B
    gens = list(p.A_gens)
    rejected: set = set()
    # integral over A[integral elements] is integral over A, so a rejected
    # monomial never needs a second look; the loop still runs to a fixpoint
    while True:
        added = False
        for e in monomials_up_to(len(B.ctx), degree_bound):
            if not any(e) or e in rejected:
                continue
            f = B.nf(Poly.monomial(B.ctx, e))
            if f.is_constant():
                continue
            res = integral_element_test(f, PairOfRings(B, tuple(gens)), None)
            if not res:
                rejected.add(e)
            elif res.degree > 1:
                gens.append(f)
                added = True
        if not added:
            break
    return PairOfRings(B, tuple(gens), bounded=True)


@dataclass(frozen=True)
class MonomialPair:
    """``QQ[N] ⊆ QQ[M]`` for finitely generated semigroups ``N ⊆ M ⊆ Z^n``."""

    rank: int
    M_gens: tuple[tuple[int, ...], ...]
    N_gens: tuple[tuple[int, ...], ...]
    search_bound: int = 6

    def __post_init__(self):
        M = tuple(tuple(int(x) for x in m) for m in self.M_gens)
        N = tuple(tuple(int(x) for x in m) for m in self.N_gens)
        object.__setattr__(self, "M_gens", M)
        object.__setattr__(self, "N_gens", N)
        for v in M + N:
            if len(v) != self.rank:
                raise PairError("vector length differs from the lattice rank")
        for v in N:
            if express_in_semigroup(v, M, self.search_bound) is None:
                raise PairError(f"N generator {v} not found in the M semigroup")

    def to_pair(self, extra_A: Sequence[tuple[int, ...]] = ()) -> PairOfRings:
        B = toric_ring(self.M_gens, self.rank)
        gens = []
        for v in tuple(self.N_gens) + tuple(extra_A):
            c = express_in_semigroup(v, self.M_gens, max(self.search_bound, 12))
            if c is None:
                raise PairError(f"{v} not in the M semigroup")
            gens.append(B.nf(Poly.monomial(B.ctx, c)))
        return PairOfRings(B, tuple(gens))


_toric_cache: dict = {}


def toric_ring(M_gens, rank: int) -> RingPresentation:
    """``QQ[x1..xp]/ker(x_i -> u^{M_i})`` with Laurent ``u``."""
    key = (tuple(M_gens), rank)
    if key in _toric_cache:
        return _toric_cache[key]
    p = len(M_gens)
    names = tuple(f"x{i + 1}" for i in range(p))
    xs = VarContext(names)
    big = internal_context(2 * rank + p)
    gens = []
    for k in range(rank):
        gens.append(Poly.var(big, k) * Poly.var(big, rank + k) - 1)
    for i, m in enumerate(M_gens):
        e = [0] * (2 * rank + p)
        for k, a in enumerate(m):
            if a > 0:
                e[k] = a
            elif a < 0:
                e[rank + k] = -a
        gens.append(Poly.var(big, 2 * rank + i) - Poly.monomial(big, e))
    order = MonomialOrder.elimination(2 * rank, 2 * rank + p)
    gb = buchberger(gens, order, big)
    rels = [
        g.restrict(xs, list(range(2 * rank, 2 * rank + p)))
        for g in gb
        if all(not any(e[: 2 * rank]) for e in g.terms)
    ]
    B = presentation(xs, rels, domain=True)
    _toric_cache[key] = B
    return B


def express_in_semigroup(v, gens, bound: int):
    """Coefficients ``c`` with ``sum c_i gens_i == v`` and ``sum c <= bound``."""
    v = tuple(v)
    n = len(v)
    if not any(v):
        return (0,) * len(gens)
    frontier = {(0,) * n: (0,) * len(gens)}
    seen = dict(frontier)
    for _ in range(bound):
        nxt = {}
        for vec, c in frontier.items():
            for i, g in enumerate(gens):
                w = tuple(a + b for a, b in zip(vec, g))
                if w in seen:
                    continue
                cc = list(c)
                cc[i] += 1
                seen[w] = tuple(cc)
                nxt[w] = tuple(cc)
                if w == v:
                    return tuple(cc)
        frontier = nxt
    return None


def in_rational_cone(v, gens) -> bool:
    """Exact test ``v ∈ cone_QQ(gens)`` via Caratheodory subsets."""
    v = tuple(v)
    if not any(v):
        return True
    n = len(v)
    gens = [tuple(g) for g in gens if any(g)]
    for size in range(1, min(n, len(gens)) + 1):
        for sub in itertools.combinations(range(len(gens)), size):
            rows = [[QQ(gens[j][k]) for j in sub] + [QQ(v[k])] for k in range(n)]
            sol = solve_rational_system(rows, size)
            if sol is None:
                continue
            if _independent([gens[j] for j in sub]) and all(x >= 0 for x in sol):
                return True
    return False


def _independent(vecs) -> bool:
    rows = [[QQ(x) for x in col] for col in zip(*vecs)]
    rank = 0
    m = len(vecs)
    rows = [r[:] for r in rows]
    for c in range(m):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            return False
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return True


@dataclass(frozen=True)
class Saturation:
    pair: MonomialPair
    generators: tuple[tuple[int, ...], ...]
    box: int
    certified: bool

    def to_pair(self) -> PairOfRings:
        P = self.pair.to_pair(self.generators)
        return PairOfRings(P.B, P.A_gens, bounded=False)


def saturate(mp: MonomialPair, box: int = 3) -> Saturation:
    """Generators of ``{m ∈ M : k m ∈ N for some k >= 1}`` = ``M ∩ cone(N)``.

    Elements of ``M`` reachable with at most ``box`` generator steps are
    scanned; generators are picked greedily in order of step count and the
    result is certified when every scanned element is a sum of generators
    with all partial sums inside the scanned set.
    """
    M = mp.M_gens
    reach: dict = {(0,) * mp.rank: 0}
    frontier = [(0,) * mp.rank]
    for step in range(1, box + 1):
        nxt = []
        for vec in frontier:
            for g in M:
                w = tuple(a + b for a, b in zip(vec, g))
                if w not in reach:
                    reach[w] = step
                    nxt.append(w)
        frontier = nxt
    cone_gens = list(mp.N_gens)
    inside = sorted(
        (w for w in reach if any(w) and in_rational_cone(w, cone_gens)),
        key=lambda w: (reach[w], sum(abs(x) for x in w), w),
    )
    inside_set = set(inside)
    chosen: list = []
    closure = {(0,) * mp.rank}

    def grow(closure, gens):
        todo = list(closure)
        while todo:
            a = todo.pop()
            for g in gens:
                w = tuple(x + y for x, y in zip(a, g))
                if w in inside_set and w not in closure:
                    closure.add(w)
                    todo.append(w)
        return closure

    for w in inside:
        if w in closure:
            continue
        chosen.append(w)
        closure = grow(closure, chosen)
    certified = inside_set <= closure
    return Saturation(mp, tuple(chosen), box, certified)
