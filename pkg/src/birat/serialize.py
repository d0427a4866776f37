"""JSON encodings of rings, pairs, homs, valuations, domains and modules.

Polynomials are canonical strings; ZERO is ``null``. Every ``*_to_json``
output re-parses with the matching ``*_from_json`` to an equal object.
"""

from __future__ import annotations

from .algebra import Poly, RingPresentation, localize, presentation
from .blowup import ModuleE
from .domains import Covering, RationalDomain
from .errors import MalformedInput
from .pairs import MonomialPair, PairHom, PairOfRings, RingMap
from .valuations import Composite, Localized, Pullback, Trivial, Valuation, Weight


def _req(d, key):
    if not isinstance(d, dict) or key not in d:
        raise MalformedInput(f"missing key {key!r}")
    return d[key]


def poly_to_json(p: Poly) -> str:
    return str(p)


def value_to_json(v):
    return None if v is None else list(v)


def ring_to_json(B: RingPresentation) -> dict:
    out = {"vars": list(B.ctx.names), "relations": [str(g) for g in B.relations]}
    if B.domain is not None:
        out["domain"] = B.domain
    return out


def ring_from_json(d) -> RingPresentation:
    names = _req(d, "vars")
    rels = d.get("relations", [])
    if not isinstance(names, list) or not isinstance(rels, list):
        raise MalformedInput("vars and relations must be lists")
    return presentation(names, rels, d.get("domain"))


def pair_to_json(p: PairOfRings) -> dict:
    out = ring_to_json(p.B)
    out["A_gens"] = [str(a) for a in p.A_gens]
    return out


def pair_from_json(d) -> PairOfRings:
    B = ring_from_json(d)
    gens = d.get("A_gens", [])
    if not isinstance(gens, list):
        raise MalformedInput("A_gens must be a list")
    return PairOfRings(B, tuple(B.parse(str(a)) for a in gens))


def monomial_pair_to_json(mp: MonomialPair) -> dict:
    return {"rank": mp.rank, "M": [list(v) for v in mp.M_gens], "N": [list(v) for v in mp.N_gens]}


def monomial_pair_from_json(d) -> MonomialPair:
    return MonomialPair(int(_req(d, "rank")), tuple(map(tuple, _req(d, "M"))), tuple(map(tuple, _req(d, "N"))))


def ring_map_to_json(h: RingMap) -> dict:
    return {"source": ring_to_json(h.source), "target": ring_to_json(h.target),
            "images": [str(g) for g in h.images]}


def ring_map_from_json(d) -> RingMap:
    S = ring_from_json(_req(d, "source"))
    T = ring_from_json(_req(d, "target"))
    return RingMap(S, T, tuple(T.parse(str(g)) for g in _req(d, "images")))


def hom_to_json(h: PairHom) -> dict:
    return {"source": pair_to_json(h.source), "target": pair_to_json(h.target),
            "images": [str(g) for g in h.images]}


def hom_from_json(d) -> PairHom:
    S = pair_from_json(_req(d, "source"))
    T = pair_from_json(_req(d, "target"))
    return PairHom(S, T, tuple(T.B.parse(str(g)) for g in _req(d, "images")))


def valuation_to_json(v: Valuation) -> dict:
    if isinstance(v, Trivial):
        return {"kind": "trivial", "ring": ring_to_json(v.ring),
                "prime": [str(p) for p in v.prime], "rank": v.rank}
    if isinstance(v, Weight):
        return {"kind": "weight", "ring": ring_to_json(v.ring), "weights": [list(w) for w in v.weights]}
    if isinstance(v, Composite):
        return {"kind": "composite", "ring": ring_to_json(v.ring), "prime": [str(p) for p in v.prime],
                "weights": [list(w) for w in v.weights]}
    if isinstance(v, Pullback):
        return {"kind": "pullback", "map": ring_map_to_json(v.hom), "inner": valuation_to_json(v.inner)}
    if isinstance(v, Localized):
        return {"kind": "localized", "inner": valuation_to_json(v.inner), "b": str(v.b)}
    raise MalformedInput(f"cannot serialize {type(v).__name__}")


def _weights(ws):
    if not isinstance(ws, list):
        raise MalformedInput("weights must be a list")
    return tuple(tuple(int(x) for x in (w if isinstance(w, list) else [w])) for w in ws)


def valuation_from_json(d, ring: RingPresentation | None = None) -> Valuation:
    kind = _req(d, "kind")
    if kind == "pullback":
        return Pullback(ring_map_from_json(_req(d, "map")), valuation_from_json(_req(d, "inner")))
    if kind == "localized":
        inner = valuation_from_json(_req(d, "inner"))
        b = inner.ring.parse(str(_req(d, "b")))
        return Localized(inner, b, localize(inner.ring, b))
    B = ring_from_json(d["ring"]) if "ring" in d else ring
    if B is None:
        raise MalformedInput("valuation needs a ring")
    if kind == "trivial":
        return Trivial(B, tuple(B.parse(str(p)) for p in d.get("prime", [])), int(d.get("rank", 0)))
    if kind == "weight":
        return Weight(B, _weights(_req(d, "weights")))
    if kind == "composite":
        return Composite(B, tuple(B.parse(str(p)) for p in _req(d, "prime")), _weights(_req(d, "weights")))
    raise MalformedInput(f"unknown valuation kind {kind!r}")


def domain_to_json(dm: RationalDomain, with_pair: bool = True) -> dict:
    out = {"numerators": [str(a) for a in dm.numerators], "denominator": str(dm.denominator)}
    if with_pair:
        out["pair"] = pair_to_json(dm.pair)
    return out


def domain_from_json(d, pair: PairOfRings | None = None) -> RationalDomain:
    P = pair_from_json(d["pair"]) if "pair" in d else pair
    if P is None:
        raise MalformedInput("domain needs a pair")
    nums = _req(d, "numerators")
    return RationalDomain(P, tuple(P.B.parse(str(a)) for a in nums), P.B.parse(str(_req(d, "denominator"))))


def covering_to_json(c: Covering) -> dict:
    return {"pair": pair_to_json(c.base), "domains": [domain_to_json(x, False) for x in c.domains]}


def covering_from_json(d) -> Covering:
    P = pair_from_json(_req(d, "pair"))
    return Covering(P, tuple(domain_from_json(x, P) for x in _req(d, "domains")))


def module_to_json(E: ModuleE) -> dict:
    return {"pair": pair_to_json(E.pair), "E": [str(g) for g in E.gens]}


def module_from_json(d) -> ModuleE:
    P = pair_from_json(_req(d, "pair"))
    return ModuleE(P, tuple(P.B.parse(str(g)) for g in _req(d, "E")))
