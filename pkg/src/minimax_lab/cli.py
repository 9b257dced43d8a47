"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure.
Every command ends its output with one JSON summary line.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import adversarial as adv
from ._config import CapacityError
from .dimension import (PairFunctionClass, Theorem2Report, dim_pairs_witness,
                        pair_dims, restricted_class, theorem2_check)
from .experiment import expand_configs, rows_to_csv, sweep
from .graph import FactorGraph, GraphError
from .plotting import render_svg
from .scoring import (DomainError, ScoringClass, TabularScoring,
                      all_tabular_classes, as_domain)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def _summary(obj):
    print(json.dumps(obj, sort_keys=True, default=_jsonable))


def _jsonable(q):
    if isinstance(q, Fraction):
        return float(q)
    if isinstance(q, tuple):
        return list(q)
    raise TypeError(type(q).__name__)


def _fmt(q):
    if isinstance(q, Fraction):
        return f"{float(q):.6g} ({q})" if q.denominator != 1 else str(q)
    if isinstance(q, float):
        return "inf" if math.isinf(q) else f"{q:.6g}"
    return str(q)


def _scoring_class(doc, graph):
    domain = doc.get("domain")
    if domain is None:
        raise UsageError("scoring class document needs a 'domain' list")
    if "tabular" in doc:
        values = doc["tabular"].get("values")
        if not values:
            raise UsageError("'tabular' needs a nonempty 'values' list")
        return all_tabular_classes(domain, graph, values)
    members = []
    for s in doc.get("scorings", []):
        s = dict(s)
        s.setdefault("graph", graph.to_dict())
        members.append(TabularScoring.from_dict(s, domain=as_domain(domain)))
    if not members:
        raise UsageError("scoring class document needs 'scorings' or 'tabular'")
    return ScoringClass(graph, domain, members)


def cmd_dims(args):
    doc = _load_json(args.cls)
    if args.graph is None:
        if args.pair or args.max:
            raise UsageError("--pair/--max require --graph")
        G = PairFunctionClass.from_dict(doc)
        dim, witness = dim_pairs_witness(G)
        print(f"{{0,1}}^2-dimension: {dim}")
        print(f"witness: {list(witness)}")
        _summary({"command": "dims", "dim": dim, "witness": list(witness)})
        return EXIT_OK
    graph = FactorGraph.from_dict(_load_json(args.graph))
    F = _scoring_class(doc, graph)
    if args.pair:
        try:
            u, v = sorted(int(s) for s in args.pair.split(","))
        except ValueError:
            raise UsageError(f"--pair expects 'u,v', got {args.pair!r}") from None
        dim, witness = dim_pairs_witness(restricted_class(F, u, v))
        print(f"{{0,1}}^2-dimension of restriction to ({u},{v}): {dim}")
        print(f"witness: {list(witness)}")
        _summary({"command": "dims", "pair": [u, v], "dim": dim, "witness": list(witness)})
        return EXIT_OK
    dims = pair_dims(F)
    for (u, v), (d, w) in dims.items():
        print(f"pair ({u},{v}): dim {d}, witness {list(w)}")
    best = max(dims, key=lambda k: dims[k][0])
    print(f"max-{{0,1}}^2-dimension: {dims[best][0]} at pair {best}")
    _summary({"command": "dims", "max_dim": dims[best][0], "pair": list(best),
              "witness": list(dims[best][1]),
              "per_pair": {f"{u}-{v}": d for (u, v), (d, _) in dims.items()}})
    return EXIT_OK


def cmd_theorem2(args):
    doc = _load_json(args.cls)
    docs = doc["classes"] if isinstance(doc, dict) and "classes" in doc else [doc]
    reports = [theorem2_check(PairFunctionClass.from_dict(d)) for d in docs]
    header = "  ".join(f"{c:>8}" for c in ("#",) + Theorem2Report.csv_columns)
    print(header)
    for k, r in enumerate(reports):
        cells = [str(k)] + [str(c) for c in r.csv_row()]
        print("  ".join(f"{c:>8}" for c in cells) + ("  PASS" if r.equal else "  FAIL"))
    n_pass = sum(r.equal for r in reports)
    print(f"{n_pass}/{len(reports)} PASS")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(",".join(("index",) + Theorem2Report.csv_columns) + "\n")
            for k, r in enumerate(reports):
                fh.write(",".join(map(str, [k] + r.csv_row())) + "\n")
    _summary({"command": "theorem2", "passed": n_pass, "total": len(reports),
              "reports": [r.to_dict() for r in reports]})
    return EXIT_OK if n_pass == len(reports) else EXIT_VERIFY


def cmd_bound(args):
    d, m = args.d, args.m
    gamma = adv.parse_number(args.gamma)
    rate, root = adv.assouad_branches(d, m, gamma)
    active = "rate" if rate < root else "root" if root < rate else "both (equal)"
    bound = min(rate, root)
    print(f"rate branch (d-1)/(81 gamma m): {_fmt(rate)}")
    print(f"root branch sqrt((d-1)/m)/81:   {_fmt(root)}")
    print(f"active branch: {active}")
    print(f"bound: {_fmt(bound)}")
    summary = {"command": "bound", "d": d, "m": m, "gamma": float(gamma),
               "rate_branch": None if math.isinf(rate) else float(rate),
               "root_branch": float(root), "active": active, "bound": float(bound)}
    if gamma > 0:
        p = adv.default_p(gamma, m)
        print(f"default p: {_fmt(p)}")
        summary["default_p"] = float(p)
        if (d - 1) * p <= 1:
            ib = adv.intermediate_bound(d, m, gamma, p)
            print(f"intermediate bound at default p: {_fmt(ib)}")
            summary["intermediate_bound"] = float(ib)
        else:
            print("intermediate bound: n/a (default p exceeds 1/(d-1))")
            summary["intermediate_bound"] = None
    else:
        print("default p: undefined at gamma = 0")
        summary["default_p"] = None
    _summary(summary)
    return EXIT_OK


def _run_games(args, single):
    doc = _load_json(args.config)
    configs = [c if not isinstance(c, dict) or "seed" in c else {**c, "seed": args.seed}
               for c in expand_configs(doc)]
    if single and len(configs) != 1:
        raise UsageError("game expects exactly one config; use sweep for several")
    rows, reports = sweep(configs)
    text = rows_to_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(reports))
    violations, errors, skipped = 0, 0, 0
    for row in rows:
        if row["errors"].startswith("BOUND VIOLATION"):
            violations += 1
        elif row["errors"].startswith("bound check skipped"):
            skipped += 1
        elif row["errors"]:
            errors += 1
    for r in reports:
        if r is None:
            continue
        status = "skipped (truth-based learner)" if r.truth_based else \
            "not checked (monte carlo)" if r.mode != "exact" else \
            ("VIOLATED" if r.violates_bound else "ok")
        print(f"{r.learner} d={r.d} m={r.m} gamma={_fmt(r.gamma)}: worst {_fmt(r.worst)} "
              f"at B={r.argmax}; intermediate bound {_fmt(r.intermediate_bound)}; "
              f"bound check {status}")
    for row in rows:
        if row["errors"] and not row["errors"].startswith(("BOUND", "bound")):
            print(f"{row['run_id']}: {row['errors']}")
    _summary({"command": "game" if single else "sweep", "configs": len(configs),
              "rows": len(rows), "violations": violations, "errors": errors,
              "bound_checks_skipped": skipped, "out": args.out})
    return EXIT_VERIFY if violations else EXIT_OK


def cmd_selftest(args):
    from . import selftest
    all_ok = True
    results = {}
    for name, ok, detail, info in selftest.run(corrupt=args.corrupt):
        all_ok &= ok
        results[name] = ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        if info:
            print(f"INFO  {name}: {info}")
    _summary({"command": "selftest", "ok": all_ok, "checks": results})
    return EXIT_OK if all_ok else EXIT_VERIFY


def build_parser():
    ap = argparse.ArgumentParser(prog="minimax-lab", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0,
                    help="base seed for commands that do not read one from a config")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", help="{0,1}^2-dimension of a class (or max over pairs)")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--graph")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pair")
    g.add_argument("--max", action="store_true")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("theorem2", help="compare pair dimension with the four VC dimensions")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_theorem2)

    p = sub.add_parser("bound", help="evaluate the minimax lower bound")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--gamma", required=True)
    p.set_defaults(func=cmd_bound)

    for name, single in (("game", True), ("sweep", False)):
        p = sub.add_parser(name, help="run the minimax game" + ("" if single else " over configs"))
        p.add_argument("--config", required=True)
        p.add_argument("--out")
        p.add_argument("--svg")
        p.set_defaults(func=lambda a, s=single: _run_games(a, s))

    p = sub.add_parser("selftest", help="run the identity checks")
    p.add_argument("--corrupt", choices=["construction"],
                   help="inject a known defect into one check (negative control)")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, DomainError, GraphError, CapacityError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        _summary({"command": args.command, "error": str(msg)})
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
