import random

import pytest

from birat.blowup import (
    BlowupError,
    ModuleE,
    NotInvertible,
    chart_coverage,
    charts,
    compose_modules,
    inverse_image_module,
    is_invertible_on_chart,
    is_principal,
    nor_blowup_commutes,
    power,
    universal_factorization,
)
from birat.pairs import MonomialPair, PairHom, PairOfRings, compose, pair
from birat.probes import probe_corpus
from birat.valuations import in_Val, tau

P = pair(["x", "y"], [], [])


class TestModule:
    def test_requires_one(self):
        with pytest.raises(BlowupError):
            ModuleE(P, ("x", "y"))
        ModuleE(P, ("x", "y"), check=False)

    def test_power(self):
        E = ModuleE(P, ("1", "x", "y"))
        assert set(map(str, power(E, 2).gens)) == {"1", "x", "y", "x^2", "x*y", "y^2"}
        assert [str(g) for g in power(E, 0).gens] == ["1"]

    def test_product(self):
        E1 = ModuleE(P, ("1", "x"))
        E2 = ModuleE(P, ("1", "y"))
        assert set(map(str, compose_modules(E1, E2).gens)) == {"1", "x", "y", "x*y"}


class TestCharts:
    def test_charts_invertible(self):
        E = ModuleE(P, ("1", "x", "y"))
        cl = charts(E)
        assert [c.index for c in cl] == [0, 1, 2]
        assert all(is_invertible_on_chart(E, c) for c in cl)

    def test_line_charts(self):
        line = pair(["x", "y"], ["x + y - 1"], [])
        E = ModuleE(line, ("x", "y"), check=False)
        cl = charts(E)
        assert len(cl) == 2
        # y/x and x/y both reduce to t - 1 because x + y = 1
        for c in cl:
            assert [str(a) for a in c.pair.A_gens] == [f"{c.loc.new_var}-1"]

    def test_nilpotent_generator_skipped(self):
        nil = pair(["x", "y"], ["x^2"], [])
        E = ModuleE(nil, ("1", "x"))
        assert [c.index for c in charts(E)] == [0]

    def test_coverage_by_probes(self):
        E = ModuleE(P, ("1", "x^2", "x*y"))
        probes = [v for v in probe_corpus(P) if in_Val(v, P)]
        assert chart_coverage(E, probes) == []

    def test_tau_agrees_on_chart(self):
        # chart at x over A = QQ[x] is QQ[x, 1/x]; a valuation finite on x has
        # zero centre there, i.e. only the presentation relations
        E = ModuleE(pair(["x"], [], ["x"]), ("1", "x"))
        c = charts(E)[1]
        from birat.valuations import Localized, Weight
        base = E.pair.B
        v = Localized(Weight(base, ((0,),)), base.parse("x"), c.loc)
        from birat.algebra import ideals_equal
        from birat.pairs import A_presentation
        Ap = A_presentation(c.pair)
        rels = list(Ap.relations)
        ker = tau(v, c.pair)
        assert ideals_equal(list(ker), rels, Ap.ctx)


class TestFactorization:
    def test_into_x_chart(self):
        from birat.algebra import localize
        E = ModuleE(P, ("1", "x", "y"))
        L = localize(P.B, P.B.parse("x"))
        t = L.ring.parse(L.new_var)
        tgt = PairOfRings(L.ring, (t, L.ring.parse(f"y*{L.new_var}")))
        h = PairHom(P, tgt, (L.embed(P.B.parse("x")), L.embed(P.B.parse("y"))))
        fac = universal_factorization(h, E)
        assert fac.chart.index == 1
        assert compose(fac.hom, fac.chart.inclusion).images == h.images

    def test_point_evaluation(self):
        E = ModuleE(P, ("1", "x", "y"))
        pt = pair(["s"], [], [])
        h = PairHom(P, pt, ("2", "3"))
        fac = universal_factorization(h, E)
        assert set(fac.candidates) == {0, 1, 2}

    def test_not_invertible(self):
        E = ModuleE(P, ("1", "x"))
        tgt = pair(["u", "v"], [], [])
        h = PairHom(P, tgt, ("u", "v"))
        with pytest.raises(NotInvertible):
            universal_factorization(h, E)

    def test_inverse_image_and_principal(self):
        E = ModuleE(P, ("1", "x"))
        tgt = pair(["u"], [], ["u"])
        h = PairHom(P, tgt, ("u", "0"))
        F = inverse_image_module(h, E)
        pr = is_principal(F)
        assert pr.principal and pr.generator_index == 0

    def test_random_chart_inclusions(self):
        rng = random.Random(1)
        from strategies import nonzero_poly
        for _ in range(10):
            extra = [nonzero_poly(P.B.ctx, rng, terms=2, deg=2)]
            E = ModuleE(P, tuple([P.B.one()] + extra))
            cl = charts(E)
            for c in cl:
                fac = universal_factorization(c.inclusion, E, cl)
                assert c.index in fac.candidates


class TestNormalization:
    def test_cusp(self):
        cusp = pair(["t"], [], ["t^2", "t^3"])
        assert nor_blowup_commutes(cusp, ["1", "t^2"], 3).agree

    def test_monomial(self):
        mp = MonomialPair(1, ((1,),), ((2,),))
        assert nor_blowup_commutes(mp, [(0,), (1,)], 3).agree

    def test_monomial_requires_one(self):
        mp = MonomialPair(1, ((1,),), ((2,),))
        with pytest.raises(BlowupError):
            nor_blowup_commutes(mp, [(1,)], 3)
