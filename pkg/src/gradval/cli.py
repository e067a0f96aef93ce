"""Command-line interface.

Every command loads the shipped fixtures plus any ``--config`` documents and
prints a JSON report.  Exit codes: 0 success, 1 mathematical failure or
violation found, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

from .config import load_documents
from .errors import GradvalError, MathematicalFailure, UsageError
from .fixtures import fixture_document
from .config import Workspace
from .galois import fixed_subfield, orbit_on_extensions
from .graded import efn
from .gvaluation import extend_valuation, gvalue, ring_member
from .parse import parse_element
from .quotient import torsor_check
from .suites import SUITES, run_neighborhood, run_suite
from .valuations import value_str
from .zrspace import nonvaluation_certificate


def _workspace(args):
    docs = [] if args.no_fixtures else [fixture_document()]
    return Workspace(docs + load_documents(args.config))


def _terms(x):
    F = x.parent.base
    return [{"degree": [str(c) for c in g], "coefficient": F.to_str(a)} for g, a in sorted(x.terms.items())]


def cmd_eval(args, ws):
    V = ws.get("valuations", args.valuation) if args.valuation else None
    K = ws.get("graded", args.graded) if args.graded else (V.parent if V else ws.get("graded", "KB"))
    x = parse_element(args.expression, K)
    out = {"element": str(x), "terms": _terms(x)}
    if V is not None:
        if V.parent != K:
            raise UsageError("valuation lives on a different graded field")
        out["valuation"] = args.valuation
        out["value"] = value_str(gvalue(V, x))
        out["member"] = ring_member(V, x)
    return out, 0


def cmd_suite(args, ws):
    r = run_suite(args.name, ws, pool_exponent=args.pool_exponent, samples=args.samples).to_config()
    return r, 0 if r["verdict"] == "PASS" else 1


def cmd_extend(args, ws):
    R = ws.get("valuations", args.valuation)
    ext = ws.get("extensions", args.extension)
    e, f, n = efn(ext)
    exts = extend_valuation(R, ext)
    return {
        "valuation": args.valuation,
        "extension": args.extension,
        "e": e,
        "f": f,
        "n": n,
        "extensions": [A.descriptor() for A in exts],
    }, 0


def cmd_orbit(args, ws):
    G = ws.get("groups", args.group)
    L, ext = fixed_subfield(G)
    R = ws.get("valuations", args.valuation)
    if R.parent != L:
        raise UsageError(f"{args.valuation} does not live on the fixed field {L!r}")
    orbits = orbit_on_extensions(G, R, ext)
    return {
        "group": args.group,
        "fixed_field": L.descriptor(),
        "orbits": [[A.descriptor() for A in o] for o in orbits],
        "transitive": len(orbits) == 1,
    }, 0 if len(orbits) == 1 else 1


def cmd_neighborhood(args, ws):
    m = ws.get("models", args.model)
    if args.S is not None:
        sc = {"name": "command line", "S": [m.index(s) for s in args.S.split(",")],
              "U": [m.index(s) for s in (args.U or ",".join(m.labels)).split(",")]}
        scenarios = [sc]
    else:
        scenarios = [s for s in m.scenarios if args.scenario in (None, s["name"])]
        if not scenarios:
            raise UsageError(f"model {args.model!r} has no scenario {args.scenario!r}")
    out = []
    ok = True
    for sc in scenarios:
        res, checks = run_neighborhood(m, sc, args.pool_exponent)
        ok = ok and all(checks.values())
        out.append({"scenario": sc["name"], "S": [m.labels[i] for i in sc["S"]],
                    "U": [m.labels[i] for i in sc["U"]], **res.to_config(), "checks": checks})
    return {"model": args.model, "hasse": [list(e) for e in m.hasse()], "results": out}, 0 if ok else 1


def cmd_torsor(args, ws):
    r = torsor_check(ws.get("groups", args.group))
    return dict(group=args.group, **r.to_config()), 0 if r.passed else 1


def cmd_certify(args, ws):
    t = ws.get("tables", args.table)
    cert = nonvaluation_certificate(t, t.k_elems, t.F, t.G)
    if cert is None:
        return {"table": args.table, "certificate": "NONE"}, 0
    return {"table": args.table, "certificate": cert.to_config(),
            "replays": cert.replay(t, t.k_elems, t.F, t.G)}, 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", action="append", default=[], metavar="PATH",
                        help="config document (YAML or JSON); repeatable")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp header")
    common.add_argument("--no-fixtures", action="store_true", help="do not load the shipped fixtures")
    common.add_argument("--pool-exponent", type=int, default=3, metavar="N",
                        help="largest grading exponent in the neighborhood candidate pool")

    p = argparse.ArgumentParser(prog="gradval", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="normalize an element; value and membership")
    s.add_argument("expression")
    s.add_argument("--in", dest="graded", metavar="GRADED", help="graded field name (default KB)")
    s.add_argument("--valuation", metavar="NAME")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("suite", parents=[common], help="run a property suite")
    s.add_argument("name", help=", ".join(SUITES))
    s.add_argument("--samples", type=int, default=100, help="sample size per oracle check")
    s.set_defaults(func=cmd_suite)

    s = sub.add_parser("extend", parents=[common], help="list the extensions of a valuation")
    s.add_argument("--valuation", required=True)
    s.add_argument("--extension", required=True)
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("orbit", parents=[common], help="group orbits on the extensions of a valuation")
    s.add_argument("--group", required=True)
    s.add_argument("--valuation", required=True)
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("neighborhood", parents=[common], help="group-stable affine neighborhood on a model")
    s.add_argument("--model", required=True)
    s.add_argument("--scenario")
    s.add_argument("--S", help="comma separated orbit labels")
    s.add_argument("--U", help="comma separated labels of the up-closed set (default all)")
    s.set_defaults(func=cmd_neighborhood)

    s = sub.add_parser("torsor", parents=[common], help="torsor comparison map for a group")
    s.add_argument("--group", required=True)
    s.set_defaults(func=cmd_torsor)

    s = sub.add_parser("certify", parents=[common], help="non-valuation certificate for a membership table")
    s.add_argument("--table", required=True)
    s.set_defaults(func=cmd_certify)
    return p


def _emit(report, args):
    if not args.no_timestamp:
        report = {"generated": datetime.now(timezone.utc).isoformat(timespec="seconds"), **report}
    text = json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ws = _workspace(args)
        report, code = args.func(args, ws)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MathematicalFailure as exc:
        print(f"failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except GradvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
