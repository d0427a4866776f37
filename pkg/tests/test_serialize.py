import json
import random

from hypothesis import given, strategies as st

from birat import serialize as S
from birat.algebra import localize
from birat.domains import RationalDomain
from birat.pairs import pair
from birat.probes import ProbeConfig, load_probes, probe_corpus, save_probes
from birat.valuations import Localized, Weight, same_valuation

from builders import random_valuation_pool
from strategies import random_poly


@given(st.integers(0, 2 ** 16))
def test_valuation_roundtrip(seed):
    rng = random.Random(seed)
    v = random_valuation_pool(rng, 1)[0]
    d = S.valuation_to_json(v)
    w = S.valuation_from_json(json.loads(json.dumps(d)))
    assert S.valuation_to_json(w) == d
    for _ in range(4):
        f = random_poly(v.ring.ctx, rng, 3, 2)
        assert v.evaluate(f) == w.evaluate(f)


def test_pair_and_domain_roundtrip():
    p = pair(["x", "y"], ["x*y"], ["x + y"])
    assert S.pair_from_json(S.pair_to_json(p)) == p
    d = RationalDomain(p, ("x", "y"), "x")
    d2 = S.domain_from_json(S.domain_to_json(d))
    assert d2.key() == d.key() and d2.pair == p


def test_localized_roundtrip():
    p = pair(["x", "y"])
    L = localize(p.B, p.B.parse("x"))
    v = Localized(Weight(p.B, ((1,), (2,))), p.B.parse("x"), L)
    w = S.valuation_from_json(S.valuation_to_json(v))
    assert same_valuation(v, w, [L.ring.parse(f"y*{L.new_var}^2")])


def test_probe_fixture(tmp_path):
    p = pair(["x", "y"], ["x + y - 1"], [])
    probes = probe_corpus(p, ProbeConfig())
    path = tmp_path / "probes.json"
    save_probes(path, probes)
    again = load_probes(path)
    assert [S.valuation_to_json(v) for v in again] == [S.valuation_to_json(v) for v in probes]


def test_shipped_fixture_loads():
    import os
    path = os.path.join(os.path.dirname(__file__), "fixtures", "probes_line.json")
    probes = load_probes(path)
    assert len(probes) >= 5
    p = pair(["x", "y"], ["x + y - 1"], [])
    assert all(v.ring == p.B for v in probes)
