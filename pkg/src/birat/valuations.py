"""Valuations with values in ``Z^r`` (lex) on presented rings.

Values are additive: ``ν = -log v``, so the multiplicative condition
``v(a) <= 1`` reads ``ν(a) >= 0`` and ``v`` bounded reads ``ν(B)`` bounded
below. The absorbing value of kernel elements is ``ZERO`` (``None``), which
compares above every vector.

Every constructible valuation except some localizations carries a *Gauss
form*: a weight-graded domain ``Q``, weights on its variables, and images
of the variables of ``B`` in ``Q``. Then ``ν(f)`` is the least weight of a
term of the normal form of ``f(images)`` in ``Q``. Kernels, primary
specializations and residue maps all work through this form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .algebra import (
    GREVLEX,
    Localization,
    MonomialOrder,
    Poly,
    RingPresentation,
    VarContext,
    buchberger,
    ideal_gb,
    internal_context,
    localize,
    presentation,
)
from .errors import BiratError
from .pairs import PairHom, PairOfRings, RingMap, ring_map_kernel, tag_context

ZERO = None


class ValuationError(BiratError):
    code = "valuation"


# ---------------------------------------------------------------------------
# value arithmetic
# ---------------------------------------------------------------------------


def vadd(a, b):
    if a is ZERO or b is ZERO:
        return ZERO
    return tuple(x + y for x, y in zip(a, b))


def vscale(a, k: int):
    if a is ZERO:
        return ZERO
    return tuple(k * x for x in a)


def vsub(a, b):
    if b is ZERO:
        raise ValuationError("cannot subtract ZERO")
    if a is ZERO:
        return ZERO
    return tuple(x - y for x, y in zip(a, b))


def vle(a, b) -> bool:
    """``a <= b`` with ZERO as the top element."""
    if b is ZERO:
        return True
    if a is ZERO:
        return False
    return a <= b


def vmin(a, b):
    return a if vle(a, b) else b


def level(a, rank: int) -> int:
    """Index (from 1) of the first nonzero coordinate; ``rank + 1`` for 0 and ZERO."""
    if a is ZERO:
        return rank + 1
    for i, x in enumerate(a):
        if x:
            return i + 1
    return rank + 1


def is_negative(a) -> bool:
    return a is not ZERO and a < tuple(0 for _ in a)


def weight_of(e, weights) -> tuple[int, ...]:
    r = len(weights[0]) if weights else 0
    out = [0] * r
    for k, w in zip(e, weights):
        if k:
            for i in range(r):
                out[i] += k * w[i]
    return tuple(out)


# ---------------------------------------------------------------------------
# Gauss forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GaussForm:
    Q: RingPresentation
    weights: tuple[tuple[int, ...], ...]
    images: tuple[Poly, ...]
    rank: int

    def value(self, h: Poly):
        h = self.Q.nf(h)
        if h.is_zero():
            return ZERO
        return min(weight_of(e, self.weights) for e in h.terms)

    def image(self, f: Poly) -> Poly:
        return self.Q.nf(f.subs(self.images, self.Q.ctx))

    def initial(self, h: Poly) -> Poly:
        """Lowest weight component of ``h`` (after normal form)."""
        h = self.Q.nf(h)
        if h.is_zero():
            return h
        w = self.value(h)
        return Poly(self.Q.ctx, {e: c for e, c in h.terms.items()
                                 if weight_of(e, self.weights) == w}, True)


def is_weight_homogeneous(p: Poly, weights) -> bool:
    ws = {weight_of(e, weights) for e in p.terms}
    return len(ws) <= 1


def check_homogeneous(B: RingPresentation, weights):
    for g in B.relations:
        if len(g.terms) == 1:
            (e,) = g.terms
            if sum(e) != 1:
                raise ValuationError(f"relation {g} is a non-variable monomial (not a domain)")
        if not is_weight_homogeneous(g, weights):
            raise ValuationError(f"relation {g} is not weight-homogeneous")


# ---------------------------------------------------------------------------
# valuation types
# ---------------------------------------------------------------------------


class Valuation:
    """Common interface. Subclasses define ``ring``, ``rank``, ``_evaluate``,
    ``gauss`` and ``_kernel``."""

    ring: RingPresentation
    rank: int

    def evaluate(self, f: Poly):
        if isinstance(f, str):
            f = self.ring.parse(f)
        if f.ctx != self.ring.ctx:
            raise ValuationError(
                f"context mismatch: {f.ctx.names} vs {self.ring.ctx.names}"
            )
        return self._evaluate(f)

    __call__ = evaluate

    def gauss(self) -> GaussForm | None:
        return None

    @cached_property
    def kernel_gb(self):
        gens = self._kernel()
        return ideal_gb(self.ring, gens)

    def kernel(self) -> list[Poly]:
        """Generators of ``ker ν`` as normal forms in ``B`` (empty for (0))."""
        out, seen = [], set()
        for g in self.kernel_gb:
            r = self.ring.nf(g).monic()
            if not r.is_zero() and r not in seen:
                seen.add(r)
                out.append(r)
        return out

    def in_kernel(self, f: Poly) -> bool:
        return self.kernel_gb.contains(f)

    def _kernel(self) -> list[Poly]:
        G = self.gauss()
        if G is None:
            raise ValuationError("kernel needs a Gauss form")
        return ring_map_kernel(G.Q, G.images, self.ring.ctx)

    def generator_values(self):
        return [self.evaluate(x) for x in self.ring.vars()]


@dataclass(frozen=True, eq=False)
class Trivial(Valuation):
    """``ν = 0`` off the prime, ``ZERO`` on it."""

    ring: RingPresentation
    prime: tuple[Poly, ...] = ()
    rank: int = 0

    def __post_init__(self):
        prime = tuple(self.ring.parse(p) if isinstance(p, str) else self.ring.nf(p) for p in self.prime)
        object.__setattr__(self, "prime", tuple(p for p in prime if not p.is_zero()))
        if ideal_gb(self.ring, self.prime).is_unit:
            raise ValuationError("the prime ideal is the unit ideal")

    @cached_property
    def quotient(self) -> RingPresentation:
        gb = ideal_gb(self.ring, self.prime)
        return RingPresentation(self.ring.ctx, gb, True)

    def _evaluate(self, f):
        if self.quotient.nf(f).is_zero():
            return ZERO
        return (0,) * self.rank

    def gauss(self):
        n = len(self.ring.ctx)
        return GaussForm(self.quotient, ((0,) * self.rank,) * n, tuple(self.quotient.vars()), self.rank)

    def _kernel(self):
        return list(self.prime)

    def __repr__(self):
        return f"Trivial(({', '.join(map(str, self.kernel()))}))"


@dataclass(frozen=True, eq=False)
class Weight(Valuation):
    """Gauss valuation: least term weight of the normal form.

    Admitted when every relation in the reduced basis is weight-homogeneous,
    so ``B`` is graded and the lowest component is well defined. ``B`` must
    be a domain; this is not checked beyond rejecting monomial relations.
    """

    ring: RingPresentation
    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        ws = tuple(tuple(int(x) for x in (w if isinstance(w, (tuple, list)) else (w,))) for w in self.weights)
        if len(ws) != len(self.ring.ctx):
            raise ValuationError("one weight per variable is required")
        if len({len(w) for w in ws}) > 1:
            raise ValuationError("weights of different ranks")
        object.__setattr__(self, "weights", ws)
        check_homogeneous(self.ring, ws)

    @property
    def rank(self):
        return len(self.weights[0]) if self.weights else 0

    def _evaluate(self, f):
        h = self.ring.nf(f)
        if h.is_zero():
            return ZERO
        return min(weight_of(e, self.weights) for e in h.terms)

    def gauss(self):
        return GaussForm(self.ring, self.weights, tuple(self.ring.vars()), self.rank)

    def _kernel(self):
        return []

    def __repr__(self):
        return f"Weight({dict(zip(self.ring.ctx.names, self.weights))})"


@dataclass(frozen=True, eq=False)
class Composite(Valuation):
    """``ZERO`` on the prime, a Gauss valuation on ``B/p`` elsewhere."""

    ring: RingPresentation
    prime: tuple[Poly, ...]
    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        prime = tuple(self.ring.parse(p) if isinstance(p, str) else self.ring.nf(p) for p in self.prime)
        object.__setattr__(self, "prime", tuple(p for p in prime if not p.is_zero()))
        ws = tuple(tuple(int(x) for x in (w if isinstance(w, (tuple, list)) else (w,))) for w in self.weights)
        if len(ws) != len(self.ring.ctx):
            raise ValuationError("one weight per variable is required")
        object.__setattr__(self, "weights", ws)
        gb = ideal_gb(self.ring, self.prime)
        if gb.is_unit:
            raise ValuationError("the prime ideal is the unit ideal")
        q = RingPresentation(self.ring.ctx, gb, True)
        check_homogeneous(q, ws)
        object.__setattr__(self, "quotient", q)

    @property
    def rank(self):
        return len(self.weights[0]) if self.weights else 0

    def _evaluate(self, f):
        h = self.quotient.nf(f)
        if h.is_zero():
            return ZERO
        return min(weight_of(e, self.weights) for e in h.terms)

    def gauss(self):
        return GaussForm(self.quotient, self.weights, tuple(self.quotient.vars()), self.rank)

    def _kernel(self):
        return list(self.prime)

    def __repr__(self):
        return (f"Composite(({', '.join(map(str, self.kernel()))}), "
                f"{dict(zip(self.ring.ctx.names, self.weights))})")


@dataclass(frozen=True, eq=False)
class Pullback(Valuation):
    """``f ↦ inner(φ(f))`` for a ring map ``φ: B -> B'``."""

    hom: RingMap
    inner: Valuation

    def __post_init__(self):
        if self.hom.target != self.inner.ring:
            raise ValuationError("inner valuation does not live on the target of the map")

    @property
    def ring(self):
        return self.hom.source

    @property
    def rank(self):
        return self.inner.rank

    @cached_property
    def _gauss(self):
        G = self.inner.gauss()
        if G is None:
            return None
        imgs = tuple(G.image(g) for g in self.hom.images)
        return GaussForm(G.Q, G.weights, imgs, G.rank)

    def gauss(self):
        return self._gauss

    def _evaluate(self, f):
        G = self._gauss
        if G is not None:
            return G.value(f.subs(G.images, G.Q.ctx))
        return self.inner.evaluate(self.hom(f))

    def _kernel(self):
        if self._gauss is not None:
            return Valuation._kernel(self)
        return ring_map_kernel(self.hom.target, self.hom.images, self.ring.ctx,
                               self.inner.kernel())

    def __repr__(self):
        return f"Pullback({self.hom.images}, {self.inner!r})"


@dataclass(frozen=True, eq=False)
class Localized(Valuation):
    """Extension of ``inner`` to ``B_b``; requires ``ν(b) != ZERO``."""

    inner: Valuation
    b: Poly
    loc: Localization | None = None

    def __post_init__(self):
        b = self.inner.ring.parse(self.b) if isinstance(self.b, str) else self.inner.ring.nf(self.b)
        object.__setattr__(self, "b", b)
        if self.inner.evaluate(b) is ZERO:
            raise ValuationError("the inverted element lies in the kernel")
        if self.loc is None:
            object.__setattr__(self, "loc", localize(self.inner.ring, b))
        object.__setattr__(self, "_vb", self.inner.evaluate(b))

    @property
    def ring(self):
        return self.loc.ring

    @property
    def rank(self):
        return self.inner.rank

    def _evaluate(self, f):
        g, k = self.loc.clear(f)
        return vsub(self.inner.evaluate(g), vscale(self._vb, k))

    @cached_property
    def _gauss(self):
        G = self.inner.gauss()
        if G is None:
            return None
        if self.loc.new_var is None:
            return GaussForm(G.Q, G.weights, G.images, G.rank)
        bbar = G.image(self.b)
        if G.initial(bbar) != bbar:
            return None
        return _extend_by_inverse(G, bbar, self.loc.ring.ctx)

    def gauss(self):
        return self._gauss

    def residue_form(self):
        """``(K, weights, lift)`` with ``K`` graded and ``lift(F)`` an element of
        ``K`` whose weight-0 component is the residue of ``F`` (for ``ν(F) >= 0``)."""
        G = self.inner.gauss()
        if G is None:
            raise ValuationError("residue computations need a Gauss form")
        if self.loc.new_var is None:
            return _residue_from_gauss(self._gauss)
        bbar = G.image(self.b)
        K = _extend_by_inverse(G, G.initial(bbar), self.loc.ring.ctx)
        s = Poly.var(K.Q.ctx, len(G.Q.ctx))
        pos = list(range(len(G.Q.ctx)))

        def lift(F):
            g, k = self.loc.clear(F)
            return K.Q.nf(G.image(g).embed(K.Q.ctx, pos) * s ** k)

        return K.Q, K.weights, lift

    def _kernel(self):
        if self._gauss is not None:
            return Valuation._kernel(self)
        return [self.loc.embed(p) for p in self.inner.kernel()]

    def __repr__(self):
        return f"Localized({self.inner!r}, 1/({self.b}))"


def _extend_by_inverse(G: GaussForm, hom_elt: Poly, ring_ctx: VarContext) -> GaussForm:
    """Adjoin ``s = 1/hom_elt`` (homogeneous) to the graded domain ``G.Q``."""
    n = len(G.Q.ctx)
    s_name = G.Q.ctx.fresh("s")
    big = G.Q.ctx.extend(s_name)
    pos = list(range(n))
    s = Poly.var(big, n)
    rels = [g.embed(big, pos) for g in G.Q.relations] + [s * hom_elt.embed(big, pos) - 1]
    Q2 = RingPresentation(big, buchberger(rels, GREVLEX, big), True)
    w = G.value(hom_elt)
    weights = G.weights + (tuple(-x for x in w),)
    images = tuple(Q2.nf(g.embed(big, pos)) for g in G.images) + (s,)
    if len(images) != len(ring_ctx):
        images = images[: len(ring_ctx)]
    return GaussForm(Q2, weights, images, G.rank)


def _residue_from_gauss(G: GaussForm):
    return G.Q, G.weights, G.image


def residue_form(v: Valuation):
    if isinstance(v, Localized):
        return v.residue_form()
    G = v.gauss()
    if G is None:
        raise ValuationError("residue computations need a Gauss form")
    return _residue_from_gauss(G)


# ---------------------------------------------------------------------------
# A-valuations, cΓ, primary specialization, Val
# ---------------------------------------------------------------------------


def is_A_valuation(v: Valuation, p: PairOfRings) -> bool:
    # ν(a+b) >= min and ν(ab) = ν(a)+ν(b), so ν >= 0 on generators gives
    # ν >= 0 on all of A
    if v.ring != p.B:
        raise ValuationError("valuation and pair live on different rings")
    return all(vle((0,) * v.rank, v.evaluate(a)) for a in p.A_gens)


def cgamma_level(v: Valuation, p: PairOfRings | None = None) -> int:
    """Level ``j*`` with ``cΓ_v = Γ ∩ {first j*-1 coordinates vanish}``.

    Every value of ``B`` is bounded below by a monomial value, and a
    negative value ``γ`` dominated by a negative monomial value ``m`` has
    ``level(m) <= level(γ)``; so ``j*`` is the least level of a negative
    element of the semigroup spanned by the variable values. That is found
    level by level: at level ``j`` only generators vanishing on the first
    ``j-1`` coordinates can contribute, and one of them negative at ``j``
    witnesses ``j* = j``. Returns ``rank + 1`` when no value is negative.
    """
    r = v.rank
    gens = [g for g in v.generator_values() if g is not ZERO]
    active = gens
    for j in range(r):
        if any(g[j] < 0 for g in active):
            return j + 1
        active = [g for g in active if g[j] == 0]
    return r + 1


def cgamma_witness(v: Valuation) -> Poly | None:
    """A variable whose value is negative at level ``j*`` (None if ``j* = ∞``)."""
    j = cgamma_level(v)
    if j > v.rank:
        return None
    for x, g in zip(v.ring.vars(), v.generator_values()):
        if g is not ZERO and level(g, v.rank) == j and g[j - 1] < 0:
            return x
    return None


def truncate(v: Valuation, j: int) -> Valuation:
    """Primary specialization at level ``j`` without the ``j <= j*`` check."""
    r = v.rank
    if j == 1:
        return v
    if isinstance(v, Trivial):
        return v
    if isinstance(v, Localized):
        return Localized(truncate(v.inner, j), v.b, v.loc)
    G = v.gauss()
    if G is None:
        raise ValuationError("primary specialization needs a Gauss form")
    cut = j - 1
    zero_prefix = (0,) * cut
    new_images = []
    for g in G.images:
        kept = {}
        for e, c in g.terms.items():
            pre = weight_of(e, G.weights)[:cut]
            if pre < zero_prefix:
                raise ValuationError(f"level {j} lies above cΓ (negative prefix)")
            if pre == zero_prefix:
                kept[e] = c
        new_images.append(G.Q.nf(Poly(G.Q.ctx, kept, True)))
    B = v.ring
    if j == r + 1:
        ker = ring_map_kernel(G.Q, new_images, B.ctx)
        return Trivial(B, tuple(ker), r)
    if isinstance(v, (Weight, Composite)):
        killed = [x for x, g in zip(B.vars(), new_images) if g.is_zero()]
        prime = tuple(v.kernel()) + tuple(killed)
        if not prime:
            return Weight(B, G.weights)
        return Composite(B, prime, G.weights)
    hom = RingMap(B, G.Q, tuple(new_images), False)
    return Pullback(hom, Weight(G.Q, G.weights))


def primary_specialize(v: Valuation, j: int, p: PairOfRings | None = None) -> Valuation:
    """Truncate values outside the convex subgroup of level ``j`` to ZERO.

    Admissible exactly when that subgroup contains ``cΓ_v``, i.e.
    ``1 <= j <= cgamma_level(v)``.
    """
    jstar = cgamma_level(v, p)
    if not 1 <= j <= jstar:
        raise ValuationError(
            f"level {j} is not admissible: cΓ has level {jstar}, need 1 <= j <= {jstar}"
        )
    return truncate(v, j)


def primary_specializations(v: Valuation, p: PairOfRings | None = None) -> list[Valuation]:
    """``v`` and its distinct primary specializations, most special last."""
    jstar = cgamma_level(v, p)
    out = [v]
    for j in range(2, jstar + 1):
        w = truncate(v, j)
        if not all(out[-1].in_kernel(k) for k in w.kernel()):
            out.append(w)
    return out


def in_Val(v: Valuation, p: PairOfRings | None = None) -> bool:
    """``v`` is unbounded, i.e. ``cΓ_v`` is the whole value group.

    With ``j* = cgamma_level(v)``, the value group lies in level ``>= j*``
    iff truncating at ``j*`` kills nothing outside ``ker v``.
    """
    jstar = cgamma_level(v, p)
    if jstar == 1:
        return True
    w = truncate(v, jstar)
    return all(v.in_kernel(k) for k in w.kernel())


def retract(v: Valuation, p: PairOfRings | None = None) -> Valuation:
    """The minimal primary specialization (a point of ``Val``)."""
    if in_Val(v, p):
        return v
    return truncate(v, cgamma_level(v, p))


def pullback(phi, v: Valuation) -> Valuation:
    hom = phi.ring_map if isinstance(phi, PairHom) else phi
    return Pullback(hom, v)


def bir_map(phi: PairHom, v: Valuation) -> Valuation:
    """``r(v ∘ φ)``: pull back, then retract into ``Val`` of the source."""
    return retract(pullback(phi, v), phi.source)


def sigma(p: PairOfRings, prime: Sequence[Poly]) -> Trivial:
    gens = tuple(p.B.parse(g) if isinstance(g, str) else g for g in prime)
    if ideal_gb(p.B, gens).is_unit:
        raise ValuationError("improper ideal")
    return Trivial(p.B, gens)


def tau(v: Valuation, p: PairOfRings) -> list[Poly]:
    """``{a ∈ A : ν(a) > 0}`` as a reduced basis in the tags ``y1..ym``.

    The residue of ``a`` with ``ν(a) >= 0`` is the weight-0 component of its
    image in the graded ring of the Gauss (or residue) form, and that
    component map is a ring map on the nonnegative part; ``τ`` is the kernel
    of ``y_k ↦ residue(a_k)``.
    """
    K, weights, lift = residue_form(v)
    zero = (0,) * v.rank
    residues = []
    for a in p.A_gens:
        h = lift(a)
        res = {}
        for e, c in h.terms.items():
            w = weight_of(e, weights)
            if w < zero:
                raise ValuationError(f"ν({a}) < 0: not an A-valuation")
            if w == zero:
                res[e] = c
        residues.append(Poly(K.ctx, res, True))
    tags = tag_context(len(p.A_gens))
    ker = ring_map_kernel(K, residues, tags)
    gb = buchberger(ker, GREVLEX, tags)
    return list(gb.polys)


@dataclass(frozen=True)
class SemiValQuery:
    numerator: Poly
    denominator: Poly


def semi_val_membership(v: Valuation, q: SemiValQuery) -> bool:
    """Whether ``num/den`` lies in the semi-valuation ring ``S_v``."""
    num, den = q.numerator, q.denominator
    if isinstance(num, str):
        num = v.ring.parse(num)
    if isinstance(den, str):
        den = v.ring.parse(den)
    vd = v.evaluate(den)
    if vd is ZERO:
        raise ValuationError(f"denominator {den} lies in the kernel")
    vn = v.evaluate(num)
    return vn is ZERO or vle(vd, vn)


@dataclass(frozen=True)
class StalkCheck:
    local: bool
    witness: Poly | None = None


def stalk_map_is_local(phi, v: Valuation, w: Valuation) -> StalkCheck:
    """Locality of ``B_{ker w} -> B'_{ker v}`` for ``w`` a specialization of
    the pullback of ``v``: local iff ``φ(ker w) ⊆ ker v``."""
    hom = phi.ring_map if isinstance(phi, PairHom) else phi
    for g in w.kernel():
        if v.evaluate(hom(g)) is not ZERO:
            return StalkCheck(False, g)
    return StalkCheck(True)


def same_kernel(v: Valuation, w: Valuation) -> bool:
    if v.ring != w.ring:
        return False
    return all(w.in_kernel(k) for k in v.kernel()) and all(
        v.in_kernel(k) for k in w.kernel()
    )


def same_valuation(v: Valuation, w: Valuation, witnesses: Iterable[Poly] = ()) -> bool:
    """Equivalence check: equal kernels and the same order relations among
    the values of the variables and of ``witnesses`` (and 1)."""
    if not same_kernel(v, w):
        return False
    elems = [v.ring.one()] + v.ring.vars() + list(witnesses)
    vals_v = [v.evaluate(f) for f in elems]
    vals_w = [w.evaluate(f) for f in elems]
    for i in range(len(elems)):
        if (vals_v[i] is ZERO) != (vals_w[i] is ZERO):
            return False
        for k in range(i + 1, len(elems)):
            if vle(vals_v[i], vals_v[k]) != vle(vals_w[i], vals_w[k]):
                return False
            if vle(vals_v[k], vals_v[i]) != vle(vals_w[k], vals_w[i]):
                return False
    return True
