"""Exact polynomial kernel over QQ.

Polynomials are sparse maps from exponent tuples to rational coefficients.
Every decision procedure used elsewhere in the package (ideal membership,
unit ideal, elimination, subalgebra membership, localization) goes through
the reduced Groebner bases computed here.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import BiratError

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ


class AlgebraError(BiratError, ValueError):
    """Raised on malformed algebraic input (context mismatch, parse errors)."""

    code = "algebra"


class NilpotentError(AlgebraError):
    code = "nilpotent"


# ---------------------------------------------------------------------------
# contexts and orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VarContext:
    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise AlgebraError(f"duplicate variable names in {self.names}")
        for n in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
                raise AlgebraError(f"bad variable name {n!r}")

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def fresh(self, base: str = "t") -> str:
        if base not in self.names:
            return base
        for k in itertools.count(1):
            cand = f"{base}{k}"
            if cand not in self.names:
                return cand

    def extend(self, *names: str) -> "VarContext":
        return VarContext(self.names + tuple(names))


def ctx(*names: str) -> VarContext:
    if len(names) == 1 and not isinstance(names[0], str):
        names = tuple(names[0])
    return VarContext(tuple(names))


@dataclass(frozen=True)
class MonomialOrder:
    """lex, grevlex, or a block order.

    ``blocks`` lists block sizes from the most significant block; inside a
    block monomials compare by grevlex. ``MonomialOrder.elimination(k)`` puts
    the first ``k`` variables in a block above the rest.
    """

    kind: str = "grevlex"
    blocks: tuple[int, ...] = ()

    @classmethod
    def elimination(cls, k: int, n: int) -> "MonomialOrder":
        return cls("block", (k, n - k))

    def key(self, e: tuple[int, ...]):
        if self.kind == "grevlex":
            return _grevlex(e)
        if self.kind == "lex":
            return e
        if self.kind == "block":
            out = []
            pos = 0
            for size in self.blocks:
                part = e[pos:pos + size]
                out.append(sum(part))
                out.extend(-x for x in reversed(part))
                pos += size
            return tuple(out)
        raise AlgebraError(f"unknown order {self.kind}")


def _grevlex(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, context: VarContext, terms: dict | None = None, _clean=False):
        self.ctx = context
        if terms is None:
            terms = {}
        elif not _clean:
            n = len(context)
            clean = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise AlgebraError("exponent length does not match context")
                c = QQ(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
            terms = clean
        self.terms = terms
        self._hash = None

    # construction ---------------------------------------------------------

    @classmethod
    def const(cls, context: VarContext, c) -> "Poly":
        c = QQ(c)
        if not c:
            return cls(context, {}, True)
        return cls(context, {(0,) * len(context): c}, True)

    @classmethod
    def var(cls, context: VarContext, name: str | int) -> "Poly":
        i = name if isinstance(name, int) else context.index(name)
        e = [0] * len(context)
        e[i] = 1
        return cls(context, {tuple(e): QQ(1)}, True)

    @classmethod
    def monomial(cls, context: VarContext, e, c=1) -> "Poly":
        return cls(context, {tuple(e): QQ(c)})

    def gens(self):
        return [Poly.var(self.ctx, i) for i in range(len(self.ctx))]

    # predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        if not self.terms:
            return QQ(0)
        if not self.is_constant():
            raise AlgebraError("not a constant")
        return next(iter(self.terms.values()))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def support_vars(self) -> set[int]:
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def lead(self, order: MonomialOrder = GREVLEX):
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    # arithmetic -----------------------------------------------------------

    def _check(self, other):
        if isinstance(other, Poly):
            if other.ctx != self.ctx:
                raise AlgebraError(f"context mismatch: {self.ctx.names} vs {other.ctx.names}")
            return other
        return Poly.const(self.ctx, other)

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.ctx, out, True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ctx, {e: -c for e, c in self.terms.items()}, True)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return Poly(self.ctx, _mul(self.terms, other.terms), True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise AlgebraError("negative power")
        result = Poly.const(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        c = QQ(c)
        if not c:
            return Poly(self.ctx, {}, True)
        return Poly(self.ctx, {e: v * c for e, v in self.terms.items()}, True)

    def monic(self, order: MonomialOrder = GREVLEX) -> "Poly":
        if not self.terms:
            return self
        _, c = self.lead(order)
        return self.scale(1 / QQ(c))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, QQ)):
            return self == Poly.const(self.ctx, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self.terms.items())))
        return self._hash

    # substitution ---------------------------------------------------------

    def subs(self, images: Sequence["Poly"], target: VarContext | None = None) -> "Poly":
        """Substitute ``images[i]`` for the i-th variable (a ring map)."""
        if len(images) != len(self.ctx):
            raise AlgebraError("wrong number of images")
        if target is None:
            target = images[0].ctx if images else self.ctx
        powers: dict[tuple[int, int], Poly] = {}
        acc: dict = {}
        for e, c in self.terms.items():
            term = {(0,) * len(target): QQ(c)}
            for i, k in enumerate(e):
                if k:
                    p = powers.get((i, k))
                    if p is None:
                        p = images[i] ** k
                        powers[(i, k)] = p
                    term = _mul(term, p.terms)
                    if not term:
                        break
            for m, v in term.items():
                s = acc.get(m, 0) + v
                if s:
                    acc[m] = s
                else:
                    acc.pop(m, None)
        return Poly(target, acc, True)

    def embed(self, target: VarContext, positions: Sequence[int]) -> "Poly":
        """Move variable i to position ``positions[i]`` of ``target``."""
        n = len(target)
        out = {}
        for e, c in self.terms.items():
            f = [0] * n
            for i, k in enumerate(e):
                if k:
                    f[positions[i]] += k
            out[tuple(f)] = c
        return Poly(target, out, True)

    def restrict(self, target: VarContext, positions: Sequence[int]) -> "Poly":
        """Inverse of :meth:`embed`; fails if a dropped variable occurs."""
        keep = set(positions)
        out = {}
        for e, c in self.terms.items():
            if any(k for i, k in enumerate(e) if i not in keep):
                raise AlgebraError("polynomial involves eliminated variables")
            out[tuple(e[p] for p in positions)] = c
        return Poly(target, out, True)

    # printing -------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: GREVLEX.key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.ctx.names, e) if k
            )
            num, den = int(c.numerator), int(c.denominator)
            mag = f"{abs(num)}" if den == 1 else f"{abs(num)}/{den}"
            sign = "-" if num < 0 else "+"
            if mono and mag == "1":
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = mag
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += sign + body
        return s

    def __repr__(self):
        return f"Poly({str(self)!r})"


def _mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def parse(text: str, context: VarContext) -> Poly:
    """Parse a polynomial expression.

    Accepts the canonical printed grammar plus parentheses, ``**`` and
    division by rational constants.
    """
    if isinstance(text, Poly):
        if text.ctx != context:
            raise AlgebraError("context mismatch")
        return text
    if isinstance(text, int):
        return Poly.const(context, text)
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise AlgebraError(f"cannot parse {text!r} at {pos}")
        pos = m.end()
        if m.group(1):
            tokens.append(("num", m.group(1)))
        elif m.group(2):
            tokens.append(("var", m.group(2)))
        else:
            tokens.append(("op", "^" if m.group(3) == "**" else m.group(3)))
    tokens.append(("end", None))
    p = _Parser(tokens, context)
    result = p.expr()
    if p.peek()[0] != "end":
        raise AlgebraError(f"trailing input in {text!r}")
    return result


class _Parser:
    def __init__(self, tokens, context):
        self.tokens = tokens
        self.i = 0
        self.ctx = context

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        acc = self.term().scale(sign)
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            f = self.factor()
            if op == "*":
                acc = acc * f
            else:
                if not f.is_constant() or f.is_zero():
                    raise AlgebraError("division only by nonzero constants")
                acc = acc.scale(1 / QQ(f.constant_value()))
        return acc

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num" or "/" in val:
                raise AlgebraError("exponent must be a natural number")
            base = base ** int(val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            try:
                return Poly.const(self.ctx, QQ(val))
            except ZeroDivisionError:
                raise AlgebraError(f"cannot parse {val!r}: zero denominator") from None
        if kind == "var":
            if val not in self.ctx.names:
                raise AlgebraError(f"unknown variable {val!r}")
            return Poly.var(self.ctx, val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise AlgebraError("missing ')'")
            return inner
        if (kind, val) == ("op", "-"):
            return -self.factor()
        raise AlgebraError(f"unexpected token {val!r}")


# ---------------------------------------------------------------------------
# Groebner bases
# ---------------------------------------------------------------------------


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_exp(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _reduce(terms: dict, basis: list, key, full=True) -> dict:
    """Remainder of ``terms`` modulo ``basis`` (list of (lm, lc, terms))."""
    p = dict(terms)
    rem = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, lc, g in basis:
            if _divides(lm, m):
                q = _sub_exp(m, lm)
                f = c / lc
                for e, v in g.items():
                    e2 = tuple(x + y for x, y in zip(e, q))
                    nv = p.get(e2, 0) - f * v
                    if nv:
                        p[e2] = nv
                    else:
                        p.pop(e2, None)
                break
        else:
            if not full:
                rem.update(p)
                return rem
            rem[m] = c
            del p[m]
    return rem


def _entry(terms, key):
    lm = max(terms, key=key)
    return (lm, terms[lm], terms)


def _spoly(a, b):
    lm1, lc1, f = a
    lm2, lc2, g = b
    l = _lcm(lm1, lm2)
    q1, q2 = _sub_exp(l, lm1), _sub_exp(l, lm2)
    out = {}
    for e, v in f.items():
        out[tuple(x + y for x, y in zip(e, q1))] = v / lc1
    for e, v in g.items():
        e2 = tuple(x + y for x, y in zip(e, q2))
        nv = out.get(e2, 0) - v / lc2
        if nv:
            out[e2] = nv
        else:
            out.pop(e2, None)
    return out


def _buchberger(polys: list[dict], order: MonomialOrder) -> list[dict]:
    key = order.key
    store: list = []
    active: list[int] = []
    pairs: set = set()

    def update(hi):
        nonlocal active, pairs
        lmh = store[hi][0]
        cand = [(hi, g) for g in active]
        keep = []
        for idx, (h, g1) in enumerate(cand):
            l1 = _lcm(lmh, store[g1][0])
            disjoint = all(not (x and y) for x, y in zip(lmh, store[g1][0]))
            if disjoint:
                keep.append((h, g1, disjoint))
                continue
            dominated = False
            for h2, g2 in cand[idx + 1:]:
                if _divides(_lcm(lmh, store[g2][0]), l1):
                    dominated = True
                    break
            if not dominated:
                for h2, g2, _ in keep:
                    if _divides(_lcm(lmh, store[g2][0]), l1):
                        dominated = True
                        break
            if not dominated:
                keep.append((h, g1, disjoint))
        newpairs = set()
        for g1, g2 in pairs:
            l = _lcm(store[g1][0], store[g2][0])
            if (
                _divides(lmh, l)
                and _lcm(store[g1][0], lmh) != l
                and _lcm(lmh, store[g2][0]) != l
            ):
                continue
            newpairs.add((g1, g2))
        for h, g, disjoint in keep:
            if not disjoint:
                newpairs.add((g, h))
        pairs = newpairs
        active = [g for g in active if not _divides(lmh, store[g][0])] + [hi]

    for f in polys:
        if not f:
            continue
        if active:
            f = _reduce(f, [store[g] for g in active], key)
            if not f:
                continue
        store.append(_entry(f, key))
        update(len(store) - 1)
        if not any(store[active[-1]][0]):
            return [{store[active[-1]][0]: QQ(1)}]

    while pairs:
        g1, g2 = min(pairs, key=lambda pr: (key(_lcm(store[pr[0]][0], store[pr[1]][0])), pr))
        pairs.discard((g1, g2))
        s = _spoly(store[g1], store[g2])
        if not s:
            continue
        h = _reduce(s, [store[g] for g in active], key)
        if not h:
            continue
        lm, lc, _ = _entry(h, key)
        h = {e: v / lc for e, v in h.items()}
        store.append(_entry(h, key))
        update(len(store) - 1)
        if not any(lm):
            return [{lm: QQ(1)}]

    # minimalize and interreduce
    basis = [store[g] for g in active]
    basis.sort(key=lambda t: key(t[0]))
    minimal = []
    for ent in basis:
        if not any(_divides(o[0], ent[0]) for o in minimal):
            minimal.append(ent)
    reduced = []
    for i, (lm, lc, f) in enumerate(minimal):
        others = [o for j, o in enumerate(minimal) if j != i]
        tail = {e: v for e, v in f.items() if e != lm}
        tail = _reduce(tail, others, key)
        g = {e: v / lc for e, v in tail.items()}
        g[lm] = QQ(1)
        reduced.append(g)
    reduced.sort(key=lambda g: key(max(g, key=key)))
    return reduced


@lru_cache(maxsize=4096)
def _gb_cached(n: int, order: MonomialOrder, gens: tuple) -> tuple:
    polys = [dict(g) for g in gens]
    out = _buchberger(polys, order)
    return tuple(tuple(sorted(g.items())) for g in out)


@dataclass(frozen=True, eq=False)
class GroebnerBasis:
    """Reduced Groebner basis of an ideal of ``QQ[ctx]`` for ``order``."""

    ctx: VarContext
    order: MonomialOrder
    polys: tuple[Poly, ...]

    def __post_init__(self):
        key = self.order.key
        object.__setattr__(
            self, "_entries", [_entry(p.terms, key) for p in self.polys]
        )

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.ctx == other.ctx
            and self.order == other.order
            and self.polys == other.polys
        )

    def __hash__(self):
        return hash((self.ctx, self.order, self.polys))

    @property
    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_constant()

    def leading_monomials(self):
        return [e for e, _, _ in self._entries]

    def reduce(self, f: Poly) -> Poly:
        if f.ctx != self.ctx:
            raise AlgebraError(
                f"context mismatch: {f.ctx.names} vs {self.ctx.names}"
            )
        if not self.polys:
            return f
        return Poly(self.ctx, _reduce(f.terms, self._entries, self.order.key), True)

    def contains(self, f: Poly) -> bool:
        return self.reduce(f).is_zero()

    def contains_ideal(self, gens: Iterable[Poly]) -> bool:
        return all(self.contains(g) for g in gens)


def buchberger(generators: Sequence[Poly], order: MonomialOrder = GREVLEX,
               context: VarContext | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``generators``."""
    generators = list(generators)
    if context is None:
        if not generators:
            raise AlgebraError("empty generator list needs an explicit context")
        context = generators[0].ctx
    for g in generators:
        if g.ctx != context:
            raise AlgebraError("context mismatch in generators")
    key = tuple(sorted(tuple(sorted(g.terms.items())) for g in generators if g))
    raw = _gb_cached(len(context), order, key)
    polys = tuple(Poly(context, dict(t), True) for t in raw)
    return GroebnerBasis(context, order, polys)


def normal_form(f: Poly, gb: GroebnerBasis) -> Poly:
    return gb.reduce(f)


def is_unit_ideal(generators: Sequence[Poly], relations: GroebnerBasis | None = None) -> bool:
    gens = list(generators)
    if relations is not None:
        gens += list(relations.polys)
    if not gens:
        return False
    return buchberger(gens, GREVLEX, gens[0].ctx).is_unit


def ideal_contains(big: Sequence[Poly], small: Sequence[Poly], context: VarContext) -> bool:
    gb = buchberger(list(big), GREVLEX, context)
    return gb.contains_ideal(small)


def ideals_equal(a: Sequence[Poly], b: Sequence[Poly], context: VarContext) -> bool:
    return ideal_contains(a, b, context) and ideal_contains(b, a, context)


# ---------------------------------------------------------------------------
# elimination helpers
# ---------------------------------------------------------------------------


def internal_context(n: int, prefix: str = "_v") -> VarContext:
    return VarContext(tuple(f"{prefix}{i}" for i in range(n)))


def eliminate(generators: Sequence[Poly], keep_from: int) -> list[Poly]:
    """Generators of ``(gens) ∩ QQ[x_keep_from, ...]`` as polynomials in the
    kept variables (a new context made of the kept names)."""
    context = generators[0].ctx if generators else None
    if context is None:
        return []
    n = len(context)
    order = MonomialOrder.elimination(keep_from, n)
    gb = buchberger(generators, order, context)
    kept = VarContext(context.names[keep_from:])
    positions = list(range(keep_from, n))
    out = []
    for g in gb.polys:
        if all(not any(e[:keep_from]) for e in g.terms):
            out.append(g.restrict(kept, positions))
    return out


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    witness: Poly | None = None

    def __bool__(self):
        return self.member


def tag_context(m: int, prefix: str = "y") -> VarContext:
    return VarContext(tuple(f"{prefix}{i + 1}" for i in range(m)))


def _linear_membership(f: Poly, gens: Sequence[Poly], relations: GroebnerBasis | None):
    """Cheap sufficient test: f in the QQ-span of {1} ∪ gens modulo I."""
    red = (lambda p: relations.reduce(p)) if relations is not None else (lambda p: p)
    vecs = [red(Poly.const(f.ctx, 1))] + [red(g) for g in gens]
    target = red(f)
    coeffs = solve_linear_combination(vecs, target)
    if coeffs is None:
        return None
    tags = tag_context(len(gens))
    w = Poly.const(tags, coeffs[0])
    for i, c in enumerate(coeffs[1:]):
        if c:
            w = w + Poly.var(tags, i).scale(c)
    return w


def solve_linear_combination(vectors: Sequence[Poly], target: Poly):
    """Rational coefficients ``c`` with ``sum c_i vectors_i == target`` or None."""
    monos = sorted({e for v in list(vectors) + [target] for e in v.terms})
    if not monos:
        return [QQ(0)] * len(vectors)
    index = {e: i for i, e in enumerate(monos)}
    rows = [[QQ(0)] * (len(vectors) + 1) for _ in monos]
    for j, v in enumerate(vectors):
        for e, c in v.terms.items():
            rows[index[e]][j] = QQ(c)
    for e, c in target.terms.items():
        rows[index[e]][-1] = QQ(c)
    sol = solve_rational_system(rows, len(vectors))
    return sol


def solve_rational_system(rows: list[list], ncols: int):
    """Exact Gauss-Jordan on an augmented matrix; one solution or None."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / QQ(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                fac = rows[i][c]
                rows[i] = [x - fac * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][-1]:
            return None
    sol = [QQ(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = rows[i][-1]
    return sol


def subalgebra_membership(f: Poly, gens: Sequence[Poly],
                          relations: GroebnerBasis | None = None) -> MembershipResult:
    """Decide whether ``f`` lies in the QQ-subalgebra generated by ``gens``
    inside ``QQ[x]/I``.

    On success the witness is a polynomial in tag variables ``y1..ym`` with
    ``witness(gens) == f`` modulo ``I``.
    """
    context = f.ctx
    gens = list(gens)
    quick = _linear_membership(f, gens, relations)
    if quick is not None:
        return MembershipResult(True, quick)
    n, m = len(context), len(gens)
    big = internal_context(n + m)
    xs = list(range(n))
    ideal = [g.embed(big, xs) for g in (relations.polys if relations else ())]
    for i, g in enumerate(gens):
        ideal.append(Poly.var(big, n + i) - g.embed(big, xs))
    order = MonomialOrder.elimination(n, n + m)
    if not ideal:
        gb = GroebnerBasis(big, order, ())
    else:
        gb = buchberger(ideal, order, big)
    r = gb.reduce(f.embed(big, xs))
    if any(any(e[:n]) for e in r.terms):
        return MembershipResult(False)
    tags = tag_context(m)
    return MembershipResult(True, r.restrict(tags, list(range(n, n + m))))


def unit_inverse(f: Poly, relations: GroebnerBasis | None = None) -> Poly | None:
    """An inverse of ``f`` in ``QQ[x]/I`` if ``f`` is a unit, else None."""
    context = f.ctx
    n = len(context)
    big = internal_context(n + 1)
    xs = list(range(n))
    z = Poly.var(big, n)
    ideal = [g.embed(big, xs) for g in (relations.polys if relations else ())]
    ideal.append(z * f.embed(big, xs) - 1)
    order = MonomialOrder("block", (1, n))
    # z first so that its normal form lands in QQ[x]
    perm = [i + 1 for i in range(n)]
    big2 = internal_context(n + 1, "_w")
    moved = [p.embed(big2, perm + [0]) for p in ideal]
    gb = buchberger(moved, order, big2)
    if gb.is_unit:
        return None
    r = gb.reduce(Poly.var(big2, 0))
    if any(e[0] for e in r.terms):
        return None
    return r.restrict(context, perm)


def monomials_up_to(n: int, d: int) -> list[tuple[int, ...]]:
    out = []
    for total in range(d + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


# ---------------------------------------------------------------------------
# ring presentations
# ---------------------------------------------------------------------------


class ZeroRingError(AlgebraError):
    code = "zero_ring"


@dataclass(frozen=True, eq=False)
class RingPresentation:
    """``B = QQ[ctx]/I`` with ``I`` stored as a reduced grevlex basis.

    ``domain`` is a hint (True, False or None for unknown) consulted by
    constructions that need an integral domain; it is never inferred from
    the relations except in the cheap cases handled by :func:`presentation`.
    """

    ctx: VarContext
    relations: GroebnerBasis
    domain: bool | None = None

    def __post_init__(self):
        if self.relations.ctx != self.ctx:
            raise AlgebraError("relations live in a different context")
        if self.relations.is_unit:
            raise ZeroRingError("1 lies in the relation ideal (zero ring)")

    def __eq__(self, other):
        return (
            isinstance(other, RingPresentation)
            and self.ctx == other.ctx
            and self.relations.polys == other.relations.polys
        )

    def __hash__(self):
        return hash((self.ctx, self.relations.polys))

    def __repr__(self):
        rel = ", ".join(map(str, self.relations.polys))
        return f"QQ[{', '.join(self.ctx.names)}]/({rel})"

    @property
    def nvars(self) -> int:
        return len(self.ctx)

    def var(self, i) -> Poly:
        return Poly.var(self.ctx, i)

    def vars(self) -> list[Poly]:
        return [Poly.var(self.ctx, i) for i in range(len(self.ctx))]

    def one(self) -> Poly:
        return Poly.const(self.ctx, 1)

    def const(self, c) -> Poly:
        return Poly.const(self.ctx, c)

    def parse(self, text) -> Poly:
        return self.nf(parse(text, self.ctx))

    def nf(self, f: Poly) -> Poly:
        return self.relations.reduce(f)

    def equal(self, f: Poly, g: Poly) -> bool:
        return self.nf(f - g).is_zero()

    def is_polynomial_ring(self) -> bool:
        return len(self.relations) == 0

    def contains(self, ideal_gens: Sequence[Poly], f: Poly) -> bool:
        return ideal_gb(self, ideal_gens).contains(f)

    def is_nilpotent(self, b: Poly) -> bool:
        """Exact test: ``b`` is nilpotent iff ``B_b`` is the zero ring."""
        b = self.nf(b)
        if b.is_zero():
            return True
        if b.is_constant():
            return False
        t = self.ctx.fresh("t")
        big = self.ctx.extend(t)
        pos = list(range(len(self.ctx)))
        gens = [g.embed(big, pos) for g in self.relations]
        gens.append(Poly.var(big, t) * b.embed(big, pos) - 1)
        return buchberger(gens, GREVLEX, big).is_unit


def presentation(names, relations=(), domain: bool | None = None) -> RingPresentation:
    """Build ``QQ[names]/(relations)``; relations may be strings."""
    c = names if isinstance(names, VarContext) else VarContext(tuple(names))
    rels = [parse(r, c) if not isinstance(r, Poly) else r for r in relations]
    gb = buchberger(rels, GREVLEX, c)
    if domain is None and all(p.degree() <= 1 for p in gb):
        domain = True
    return RingPresentation(c, gb, domain)


def ideal_gb(B: RingPresentation, gens: Sequence[Poly], order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    """Basis of ``I + (gens)`` in the ambient polynomial ring of ``B``."""
    return buchberger(list(B.relations.polys) + [g for g in gens if g], order, B.ctx)


@dataclass(frozen=True, eq=False)
class Localization:
    """``B_b`` together with the element of ``B_b`` inverting ``b``."""

    base: RingPresentation
    b: Poly
    ring: RingPresentation
    inverse: Poly

    @property
    def new_var(self) -> str | None:
        if self.ring.ctx == self.base.ctx:
            return None
        return self.ring.ctx.names[-1]

    def embed(self, f: Poly) -> Poly:
        if self.ring.ctx == self.base.ctx:
            return self.ring.nf(f)
        return self.ring.nf(f.embed(self.ring.ctx, list(range(len(self.base.ctx)))))

    def clear(self, h: Poly) -> tuple[Poly, int]:
        """Write ``h`` as ``g / b^k`` with ``g`` in ``B``."""
        if self.new_var is None:
            return self.base.nf(h.restrict(self.base.ctx, list(range(len(self.base.ctx))))), 0
        n = len(self.base.ctx)
        k = max((e[n] for e in h.terms), default=0)
        out = Poly(self.base.ctx)
        powers = [self.b ** i for i in range(k + 1)]
        for e, c in h.terms.items():
            mono = Poly(self.base.ctx, {e[:n]: c}, True)
            out = out + mono * powers[k - e[n]]
        return self.base.nf(out), k


def localize(B: RingPresentation, b: Poly, name: str | None = None) -> Localization:
    """Rabinowitsch presentation ``B[t]/(I, t*b - 1)``.

    A nonzero constant ``b`` needs no new variable. Nilpotent ``b`` raises
    :class:`NilpotentError` since ``B_b`` is then the zero ring.
    """
    b = B.nf(b)
    if b.is_zero():
        raise NilpotentError("cannot invert 0")
    if b.is_constant():
        return Localization(B, b, B, B.const(1 / QQ(b.constant_value())))
    if name is None:
        name = B.ctx.fresh("t")
    big = B.ctx.extend(name)
    pos = list(range(len(B.ctx)))
    t = Poly.var(big, name)
    gens = [g.embed(big, pos) for g in B.relations] + [t * b.embed(big, pos) - 1]
    gb = buchberger(gens, GREVLEX, big)
    if gb.is_unit:
        raise NilpotentError(f"{b} is nilpotent in {B}")
    ring = RingPresentation(big, gb, B.domain if B.domain else None)
    return Localization(B, b, ring, t)
