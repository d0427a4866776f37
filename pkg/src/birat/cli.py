"""Batch front end: one JSON request in, one JSON response out.

Exit codes: 0 ok, 1 domain error raised by the library, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, replace

from . import blowup as BU
from . import domains as D
from . import pairs as P
from . import valuations as V
from . import serialize as S
from .errors import BiratError, MalformedInput
from .probes import ProbeConfig, load_probes, probe_corpus


@dataclass(frozen=True)
class Config:
    degree_bound: int = 2
    seed: int = 0
    probes_path: str | None = None
    probe_config: ProbeConfig = field(default_factory=ProbeConfig)


def _level(j, rank):
    return "inf" if j == rank + 1 else j


def _probes(cfg: Config, pair):
    if cfg.probes_path:
        return [v for v in load_probes(cfg.probes_path) if v.ring == pair.B]
    return probe_corpus(pair, replace(cfg.probe_config, seed=cfg.seed))


def cmd_eval(req, cfg):
    v = S.valuation_from_json(S._req(req, "valuation"))
    if "elements" in req:
        return {"values": [S.value_to_json(v.evaluate(v.ring.parse(str(f)))) for f in req["elements"]]}
    return {"value": S.value_to_json(v.evaluate(v.ring.parse(str(S._req(req, "f")))))}


def cmd_check_val(req, cfg):
    v = S.valuation_from_json(S._req(req, "valuation"))
    p = S.pair_from_json(S._req(req, "pair"))
    a = V.is_A_valuation(v, p)
    out = {"is_A_valuation": a, "kernel": [str(k) for k in v.kernel()]}
    if a:
        out["cgamma_level"] = _level(V.cgamma_level(v, p), v.rank)
        out["in_Val"] = V.in_Val(v, p)
    return out


def cmd_retract(req, cfg):
    v = S.valuation_from_json(S._req(req, "valuation"))
    p = S.pair_from_json(S._req(req, "pair"))
    if not V.is_A_valuation(v, p):
        raise V.ValuationError("not an A-valuation")
    r = V.retract(v, p)
    return {"valuation": S.valuation_to_json(r), "kernel": [str(k) for k in r.kernel()]}


def cmd_bir_map(req, cfg):
    h = S.hom_from_json(S._req(req, "hom"))
    v = S.valuation_from_json(S._req(req, "valuation"))
    r = V.bir_map(h, v)
    return {"valuation": S.valuation_to_json(r), "kernel": [str(k) for k in r.kernel()]}


def cmd_domain(req, cfg):
    d = S.domain_from_json(S._req(req, "domain"))
    out = {"pair": S.pair_to_json(D.to_pair(d))}
    if "valuation" in req:
        out["member"] = D.membership(S.valuation_from_json(req["valuation"]), d)
    return out


def _domains(req):
    if "pair" in req:
        p = S.pair_from_json(req["pair"])
        return [S.domain_from_json(x, p) for x in S._req(req, "domains")]
    return [S.domain_from_json(x) for x in S._req(req, "domains")]


def cmd_intersect(req, cfg):
    ds = _domains(req)
    if not ds:
        raise MalformedInput("no domains given")
    out = ds[0]
    for d in ds[1:]:
        out = D.intersect(out, d)
    return {"domain": S.domain_to_json(out)}


def cmd_refine_cover(req, cfg):
    ds = _domains(req)
    c = D.Covering(ds[0].pair, tuple(ds))
    check = req.get("check_unit", True)
    if not isinstance(check, bool):
        raise MalformedInput("check_unit must be a boolean")
    ref = D.refine_cover(c, check_unit=check)
    missing = D.uncovered(ref.covering, _probes(cfg, c.base))
    return {
        "domains": [S.domain_to_json(x, False) for x in ref.covering.domains],
        "assignment": list(ref.assignment),
        "index": [list(r) for r in ref.index],
        "generators": [str(g) for g in ref.generators],
        "uncovered_probes": len(missing),
    }


def cmd_flatten(req, cfg):
    outer = S.domain_from_json(S._req(req, "outer"))
    inner = S._req(req, "inner")
    res = D.flatten(outer, [str(h) for h in S._req(inner, "numerators")], str(S._req(inner, "denominator")))
    return {"domain": S.domain_to_json(res.domain), "case": res.case}


def cmd_blowup_charts(req, cfg):
    E = S.module_from_json(req)
    out = []
    for c in BU.charts(E):
        out.append({"index": c.index, "generator": str(c.generator),
                    "pair": S.pair_to_json(c.pair), "invertible": BU.is_invertible_on_chart(E, c)})
    return {"charts": out}


def cmd_normalize(req, cfg):
    if "monomial_pair" in req:
        mp = S.monomial_pair_from_json(req["monomial_pair"])
        sat = P.saturate(mp, cfg.degree_bound + 2)
        return {"generators": [list(g) for g in sat.generators], "certified": sat.certified,
                "pair": S.pair_to_json(sat.to_pair()), "bounded": False}
    p = S.pair_from_json(S._req(req, "pair"))
    n = P.relative_normalization(p, cfg.degree_bound)
    return {"pair": S.pair_to_json(n), "bounded": n.bounded}


def cmd_is_adic(req, cfg):
    h = S.hom_from_json(S._req(req, "hom"))
    res = P.is_adic(h, cfg.degree_bound * 4, _probes(cfg, h.target))
    out = {"status": res.status, "bound": res.bound}
    if res.witness is not None:
        out["witness"] = S.valuation_to_json(res.witness)
    return out


def cmd_sheaf_check(req, cfg):
    ds = _domains(req)
    c = D.Covering(ds[0].pair, tuple(ds))
    res = D.sheaf_equalizer_check(c, [str(s) for s in S._req(req, "sections")], cfg.degree_bound)
    if isinstance(res, D.Mismatch):
        return {"glued": False, "mismatch": list(res.pair), "witness": str(res.witness)}
    return {"glued": res.section is not None,
            "section": None if res.section is None else str(res.section), "in_O": res.in_O}


def cmd_tau(req, cfg):
    v = S.valuation_from_json(S._req(req, "valuation"))
    p = S.pair_from_json(S._req(req, "pair"))
    return {"ideal": [str(g) for g in V.tau(v, p)], "tags": {f"y{i + 1}": str(a) for i, a in enumerate(p.A_gens)}}


def cmd_sigma(req, cfg):
    p = S.pair_from_json(S._req(req, "pair"))
    v = V.sigma(p, [p.B.parse(str(g)) for g in req.get("prime", [])])
    return {"valuation": S.valuation_to_json(v)}


COMMANDS = {
    "eval": cmd_eval,
    "check-val": cmd_check_val,
    "retract": cmd_retract,
    "bir-map": cmd_bir_map,
    "domain": cmd_domain,
    "intersect": cmd_intersect,
    "refine-cover": cmd_refine_cover,
    "flatten": cmd_flatten,
    "blowup-charts": cmd_blowup_charts,
    "normalize": cmd_normalize,
    "is-adic": cmd_is_adic,
    "sheaf-check": cmd_sheaf_check,
    "tau": cmd_tau,
    "sigma": cmd_sigma,
}


def run(request, cfg: Config = Config()) -> tuple[dict, int]:
    """Dispatch one request; returns ``(response, exit_code)``."""
    if not isinstance(request, dict):
        return _error(MalformedInput("request must be a JSON object")), 2
    command = request.get("command")
    if command not in COMMANDS:
        return _error(MalformedInput(f"unknown command {command!r}")), 2
    try:
        result = COMMANDS[command](request, cfg)
    except MalformedInput as exc:
        return _error(exc), 2
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, BiratError) and not _is_parse_error(exc):
            return _error(exc), 1
        return _error(MalformedInput(str(exc))), 2
    except BiratError as exc:
        return _error(exc), 1
    return {"status": "ok", "result": result, "diagnostics": []}, 0


def _is_parse_error(exc) -> bool:
    msg = str(exc)
    return any(s in msg for s in ("cannot parse", "unknown variable", "trailing input", "unexpected token"))


def _error(exc) -> dict:
    code = getattr(exc, "code", "error")
    return {"status": "error", "result": None,
            "diagnostics": [f"{code}: {exc}"], "error": {"code": code, "message": str(exc)}}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="birat", description="Valuation spaces of pairs of rings, computed exactly.")
    ap.add_argument("--file", help="read the request from this file instead of stdin")
    ap.add_argument("--probes", help="JSON probe corpus used by coverage and adicness checks")
    ap.add_argument("--degree-bound", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    try:
        text = open(args.file).read() if args.file else sys.stdin.read()
        request = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        sys.stdout.write(dumps(_error(MalformedInput(str(exc)))) + "\n")
        return 2
    cfg = Config(degree_bound=args.degree_bound, seed=args.seed, probes_path=args.probes)
    response, code = run(request, cfg)
    sys.stdout.write(dumps(response) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
