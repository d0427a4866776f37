import random

import pytest
from hypothesis import given, strategies as st

from birat.algebra import localize, presentation
from birat.pairs import PairHom, PairOfRings, RingMap, pair
from birat.valuations import (
    ZERO,
    Composite,
    Localized,
    Pullback,
    SemiValQuery,
    Trivial,
    ValuationError,
    Weight,
    cgamma_level,
    cgamma_witness,
    in_Val,
    is_A_valuation,
    primary_specialize,
    primary_specializations,
    retract,
    same_valuation,
    semi_val_membership,
    sigma,
    tau,
    truncate,
)

from builders import random_valuation_pool, random_weights
from oracles import gauss_value, semigroup_min_level
from strategies import polys, random_poly

XY = presentation(["x", "y"])
XYZ = presentation(["x", "y", "z"])


class TestEvaluate:
    def test_gauss_example(self):
        v = Weight(XY, ((1,), (2,)))
        assert v.evaluate(XY.parse("3*x^2*y + y^2")) == (4,)

    def test_rank_two(self):
        v = Weight(XY, ((0, 1), (0, 0)))
        assert v.evaluate(XY.parse("x + y")) == (0, 0)
        v2 = Weight(XY, ((1, 0), (0, 1)))
        assert v2.evaluate(XY.parse("x + y")) == (0, 1)

    def test_trivial(self):
        v = Trivial(XY, ("x",))
        assert v.evaluate(XY.parse("x^2*y")) is ZERO
        assert v.evaluate(XY.parse("y + 1")) == ()

    def test_zero_is_zero(self):
        assert Weight(XY, ((1,), (1,))).evaluate(XY.parse("0")) is ZERO

    @given(polys(XY.ctx))
    def test_weight_matches_term_oracle(self, f):
        v = Weight(XY, ((2, -1), (-1, 3)))
        assert v.evaluate(f) == gauss_value(f.terms, v.weights)

    def test_relation_must_be_homogeneous(self):
        B = presentation(["x", "y"], ["y - x^2"])
        with pytest.raises(ValuationError):
            Weight(B, ((1,), (1,)))
        Weight(B, ((1,), (2,)))

    def test_monomial_relation_rejected(self):
        with pytest.raises(ValuationError):
            Weight(presentation(["x", "y"], ["x*y"]), ((1,), (1,)))

    def test_composite(self):
        v = Composite(XYZ, ("x",), ((5,), (1,), (2,)))
        assert v.evaluate(XYZ.parse("x + y*z")) == (3,)
        assert v.evaluate(XYZ.parse("x*y")) is ZERO

    def test_localized_values(self):
        L = localize(XY, XY.parse("x"))
        v = Localized(Weight(XY, ((1,), (0,))), XY.parse("x"), L)
        t = L.new_var
        assert v.evaluate(L.ring.parse(f"{t}^3*y")) == (-3,)
        assert v.evaluate(L.ring.parse(f"x*{t}")) == (0,)

    def test_localized_rejects_kernel_element(self):
        with pytest.raises(ValuationError):
            Localized(Trivial(XY, ("x",)), XY.parse("x"))

    def test_pullback(self):
        U = presentation(["u"])
        phi = RingMap(XY, U, (U.parse("u"), U.parse("u^2 + u")))
        v = Pullback(phi, Weight(U, ((1,),)))
        assert v.evaluate(XY.parse("y - x")) == (2,)
        assert len(v.kernel()) == 1 and v.in_kernel(XY.parse("y - x^2 - x"))
        assert not v.in_kernel(XY.parse("y - x^2"))


@given(st.integers(0, 2 ** 20))
def test_axioms_hypothesis(seed):
    rng = random.Random(seed)
    v = random_valuation_pool(rng, 1)[0]
    f = random_poly(v.ring.ctx, rng, 3, 3)
    g = random_poly(v.ring.ctx, rng, 3, 3)
    vf, vg = v.evaluate(f), v.evaluate(g)
    prod = v.evaluate(f * g)
    if vf is None or vg is None:
        assert prod is None
    else:
        assert prod == tuple(a + b for a, b in zip(vf, vg))
    s = v.evaluate(f + g)
    lo = vg if vf is None else vf if vg is None else min(vf, vg)
    assert s is None or (lo is not None and s >= lo)


class TestKernel:
    def test_kernel_is_prime_of_trivial(self):
        v = Trivial(XY, ("x", "y - 1"))
        assert set(map(str, v.kernel())) == {"x", "y-1"}

    def test_kernel_consistent_with_values(self):
        rng = random.Random(3)
        for v in random_valuation_pool(rng, 25):
            for k in v.kernel():
                assert v.evaluate(k) is ZERO
            for _ in range(5):
                f = random_poly(v.ring.ctx, rng, 3, 2)
                assert (v.evaluate(f) is ZERO) == v.in_kernel(f)


class TestCgamma:
    def test_examples(self):
        assert cgamma_level(Weight(XY, ((-1,), (2,)))) == 1
        assert cgamma_level(Weight(XY, ((0, -1), (1, 0)))) == 2
        assert cgamma_level(Weight(XY, ((0,), (0,)))) == 2

    @given(st.integers(0, 10_000))
    def test_against_semigroup_enumeration(self, seed):
        rng = random.Random(seed)
        rank = rng.randint(1, 3)
        v = Weight(XYZ, random_weights(3, rank, rng, -2, 2))
        vals = [v.evaluate(x) for x in XYZ.vars()]
        assert cgamma_level(v) == semigroup_min_level(vals, rank, 6)

    def test_witness(self):
        v = Weight(XY, ((0, -1), (1, 0)))
        assert str(cgamma_witness(v)) == "x"
        assert cgamma_witness(Weight(XY, ((1,), (1,)))) is None


class TestSpecialization:
    def test_rank_two_chain(self):
        v = Weight(XY, ((0, -1), (1, 0)))
        p = PairOfRings(XY, (XY.parse("y"),))
        assert cgamma_level(v, p) == 2
        chain = primary_specializations(v, p)
        assert isinstance(chain[0], Weight) and isinstance(chain[1], Composite)
        assert [str(k) for k in chain[1].kernel()] == ["y"]
        r = retract(v, p)
        assert in_Val(r, p) and same_valuation(r, chain[-1])

    def test_inadmissible_level(self):
        v = Weight(XY, ((-1, 0), (1, 0)))
        with pytest.raises(ValuationError):
            primary_specialize(v, 3)
        assert primary_specialize(v, 1) is v

    def test_truncate_values(self):
        v = Weight(XYZ, ((0, 1), (0, -1), (1, 0)))
        w = truncate(v, 2)
        assert w.evaluate(XYZ.parse("z")) is ZERO
        assert w.evaluate(XYZ.parse("x*y + z")) == (0, 0)
        assert w.evaluate(XYZ.parse("y")) == (0, -1)

    def test_retract_idempotent_random(self):
        rng = random.Random(2)
        for _ in range(20):
            v = Weight(XYZ, random_weights(3, 2, rng))
            r = retract(v)
            assert in_Val(r)
            assert same_valuation(retract(r), r)


class TestSigmaTau:
    def test_tau_sigma_zero(self):
        p = pair(["x"], [], ["x"])
        assert tau(sigma(p, []), p) == []

    def test_tau_of_gauss(self):
        p = pair(["x", "y"], [], ["x", "y"])
        v = Weight(p.B, ((1,), (0,)))
        assert [str(g) for g in tau(v, p)] == ["y1"]

    def test_tau_localized(self):
        p = pair(["x", "y"], [], [])
        L = localize(p.B, p.B.parse("x"))
        pl = PairOfRings(L.ring, (L.ring.parse(f"y*{L.new_var}"),))
        v = Localized(Weight(p.B, ((0,), (1,))), p.B.parse("x"), L)
        assert [str(g) for g in tau(v, pl)] == ["y1"]

    def test_sigma_improper(self):
        with pytest.raises(ValuationError):
            sigma(pair(["x"], [], ["x"]), ["1"])

    def test_tau_requires_A_valuation(self):
        p = pair(["x"], [], ["x"])
        with pytest.raises(ValuationError):
            tau(Weight(p.B, ((-1,),)), p)


class TestSemiVal:
    def test_membership(self):
        v = Weight(XY, ((0,), (1,)))
        assert semi_val_membership(v, SemiValQuery(XY.parse("y"), XY.parse("x"))) is True
        assert semi_val_membership(v, SemiValQuery(XY.parse("x"), XY.parse("y"))) is False
        with pytest.raises(ValuationError):
            semi_val_membership(Trivial(XY, ("x",)), SemiValQuery(XY.parse("1"), XY.parse("x")))


class TestMNotLocal:
    def test_chain(self):
        p = pair(["T"], [], ["T"])
        L = localize(p.B, p.B.parse("T"))
        T = L.embed(p.B.parse("T"))
        tgt = PairOfRings(L.ring, (T,))
        v = Localized(Weight(p.B, ((1,),)), p.B.parse("T"), L)
        assert is_A_valuation(v, tgt) and in_Val(v, tgt)
        assert cgamma_level(v, tgt) == 1
        h = PairHom(p, tgt, (T,))
        w = Pullback(h.ring_map, v)
        assert w.evaluate(p.B.parse("T^2 + T")) == (1,)
        assert w.kernel() == [] and not in_Val(w, p)
        r = retract(w, p)
        assert isinstance(r, Trivial) and [str(k) for k in r.kernel()] == ["T"]
