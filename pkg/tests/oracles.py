"""Independent oracles. None of these call the library's Groebner code."""

import itertools
from fractions import Fraction

import sympy


def sympy_reduced_gb(polys, names, order):
    """Reduced basis from sympy, as a sorted list of monic sympy expressions."""
    gens = sympy.symbols(names)
    exprs = [sympy.sympify(str(p).replace("^", "**")) for p in polys if not p.is_zero()]
    if not exprs:
        return []
    G = sympy.groebner(exprs, *gens, order=order)
    return sorted(str(sympy.Poly(g, *gens).monic().as_expr()) for g in G.exprs)


def as_sympy_monic(polys, names):
    gens = sympy.symbols(names)
    return sorted(
        str(sympy.Poly(sympy.sympify(str(p).replace("^", "**")), *gens).monic().as_expr())
        for p in polys
    )


def sympy_in_ideal(f, gens, names):
    syms = sympy.symbols(names)
    G = sympy.groebner([sympy.sympify(str(g).replace("^", "**")) for g in gens], *syms, order="grevlex")
    return G.contains(sympy.sympify(str(f).replace("^", "**")))


def gauss_value(terms: dict, weights):
    """Least weight among the terms of a polynomial (no normal form)."""
    if not terms:
        return None
    r = len(weights[0])
    best = None
    for e in terms:
        w = tuple(sum(k * weights[i][j] for i, k in enumerate(e)) for j in range(r))
        if best is None or w < best:
            best = w
    return best


def semigroup_min_level(gen_values, rank, max_exp=10):
    """Brute force: least level of a negative element of the semigroup
    spanned by ``gen_values`` with exponents up to ``max_exp`` (rank+1 if none)."""
    gens = [g for g in gen_values if g is not None]
    best = rank + 1
    k = len(gens)
    if k == 0:
        return best
    limit = max_exp if k <= 3 else 3
    for exps in itertools.product(range(limit + 1), repeat=k):
        if not any(exps):
            continue
        v = tuple(sum(e * g[i] for e, g in zip(exps, gens)) for i in range(rank))
        if v < (0,) * rank:
            lvl = next(i + 1 for i, x in enumerate(v) if x)
            best = min(best, lvl)
    return best


def value_level(v, rank):
    if v is None:
        return rank + 1
    for i, x in enumerate(v):
        if x:
            return i + 1
    return rank + 1


def solve_fraction_system(rows, ncols):
    """Gauss-Jordan over Fraction; returns one solution or None."""
    rows = [[Fraction(x) for x in r] for r in rows]
    piv_cols = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][-1]
    return sol


def integral_by_linear_algebra(f_expr, a_exprs, var_names, n, coeff_deg):
    """Is there a monic degree-``n`` relation of ``f`` with coefficients in the
    span of products of the ``a``'s of total degree ``<= coeff_deg``?
    Works in a polynomial ring through sympy expansion."""
    syms = sympy.symbols(var_names)
    f = sympy.sympify(f_expr)
    a = [sympy.sympify(x) for x in a_exprs]
    basis = [sympy.Integer(1)]
    for d in range(1, coeff_deg + 1):
        for combo in itertools.combinations_with_replacement(range(len(a)), d):
            p = sympy.Integer(1)
            for i in combo:
                p *= a[i]
            basis.append(sympy.expand(p))
    cols = []
    for k in range(n):
        for b in basis:
            cols.append(sympy.expand(b * f ** k))
    target = -sympy.expand(f ** n)
    monos = set()
    for e in cols + [target]:
        monos |= set(sympy.Poly(e, *syms).as_dict())
    monos = sorted(monos)
    rows = []
    for m in monos:
        row = [sympy.Poly(c, *syms).as_dict().get(m, 0) for c in cols]
        row.append(sympy.Poly(target, *syms).as_dict().get(m, 0))
        rows.append(row)
    return solve_fraction_system(rows, len(cols)) is not None


def saturation_oracle(M_gens, N_gens, box, kmax=6, nbox=8):
    """Elements ``m`` of ``M`` (at most ``box`` steps) with ``k m ∈ N`` for some
    ``1 <= k <= kmax``, N explored to ``nbox`` steps."""
    def reach(gens, steps):
        seen = {tuple(0 for _ in gens[0]) if gens else ()}
        frontier = set(seen)
        for _ in range(steps):
            nxt = set()
            for v in frontier:
                for g in gens:
                    w = tuple(a + b for a, b in zip(v, g))
                    if w not in seen:
                        seen.add(w)
                        nxt.add(w)
            frontier = nxt
        return seen
    Mset = reach(list(M_gens), box)
    Nset = reach(list(N_gens), nbox)
    out = set()
    for m in Mset:
        if not any(m):
            continue
        if any(tuple(k * x for x in m) in Nset for k in range(1, kmax + 1)):
            out.add(m)
    return out
