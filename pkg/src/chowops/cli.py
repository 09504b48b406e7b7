"""Command-line front end: describe varieties, compute operation tables, verify.

Exit codes: 0 pass, 1 verification failure, 2 input error, 3 internal
extraction failure.  All numeric output is exact decimal strings;
serialization is deterministic (sorted keys) so output is byte-stable for a
fixed seed and input.
"""
import argparse
import csv
import io
import json
import os
import sys

from .core import ModPClass, class_from_json, class_to_json, coeff_to_str, modp_to_json
from .errors import ChowopsError, ExtractionFailure
from .steenrod import op_component, steenrod_operation
from .varieties import variety_from_spec
from .verify import SUITES, run_suite


def _max_dim():
    return int(os.environ.get("STEENROD_MAX_DIM", "8"))


def _load_variety(text):
    if text is None:
        raise ValueError("--variety is required")
    text = text.strip()
    if text.startswith("{"):
        spec = json.loads(text)
    elif os.path.isfile(text):
        with open(text) as fh:
            spec = json.load(fh)
    else:
        spec = text  # shorthand like P^2, Q_3, P^1xP^1
    return variety_from_spec(spec, max_dim=_max_dim())


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _dump(obj, out_path):
    _emit(json.dumps(obj, indent=2, sort_keys=True), out_path)


def cmd_describe(args):
    X = _load_variety(args.variety)
    mult = {}
    for (a, b), vec in sorted(X._table.items()):
        if X._index[a] > X._index[b]:
            continue
        if vec:
            mult.setdefault(a, {})[b] = {c: str(v) for c, v in sorted(vec.items())}
    report = {
        "name": X.name,
        "dim": X.dim,
        "cells": [[l, d] for l, d in X.cells],
        "fundamental": X.fundamental,
        "degree_vector": {l: str(v) for l, v in sorted(X.degree_vector.items())},
        "mult_table": mult,
        "tangent_ch": {l: coeff_to_str(v)
                       for l, v in sorted(X.tangent_ch.items())},
        "tau_matrix": {c: {row: coeff_to_str(v) for row, v in sorted(col.items())}
                       for c, col in sorted(X.tau_columns.items())},
    }
    _dump(report, args.out)
    return 0


def _convention_name(conv):
    return "cohomological" if conv in ("coh", "cohomological") else "homological"


def _operate_one(X, p, xbar, convention):
    ops = steenrod_operation(xbar, p, convention=convention)
    return {"S_%d" % k: modp_to_json(v) for k, v in enumerate(ops)}


def cmd_operate(args):
    X = _load_variety(args.variety)
    p = args.p
    raw = json.loads(args.cls)
    x = class_from_json(X, raw)
    xbar = ModPClass.from_integral(x.as_integral(), p)
    result = {
        "variety": X.name,
        "p": p,
        "input": class_to_json(x),
        "ops": _operate_one(X, p, xbar, args.convention),
        "convention": _convention_name(args.convention),
    }
    _dump(result, args.out)
    return 0


def cmd_table(args):
    X = _load_variety(args.variety)
    p = args.p
    k_max = X.dim // (p - 1)
    rows = []
    for label in X.labels():
        xbar = ModPClass(X, p, {label: 1})
        ops = steenrod_operation(xbar, p, convention=args.convention)
        for k in range(k_max + 1):
            rows.append((label, k, modp_to_json(op_component(ops, k))))
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["cell", "k", "output"])
        for label, k, vec in rows:
            writer.writerow([label, k, json.dumps(vec, sort_keys=True)])
        _emit(buf.getvalue(), args.out)
    else:
        _dump({"variety": X.name, "p": p,
               "convention": _convention_name(args.convention),
               "rows": [{"cell": l, "k": k, "output": v}
                        for l, k, v in rows]}, args.out)
    return 0


def cmd_verify(args):
    params = {
        "seed": args.seed,
        "p": args.p,
        "variety": args.variety,
        "n": args.n,
        "k": args.k,
        "trials": args.trials,
        "max_dim": _max_dim(),
    }
    report = run_suite(args.suite, **params)
    _dump(report, args.out)
    return 0 if report["passed"] else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="chowops",
        description="Exact Steenrod operations on Chow groups of split "
                    "cellular varieties.")
    subs = parser.add_subparsers(dest="verb", required=True)

    def add_common(sp, with_class=False, with_p=True):
        sp.add_argument("--variety", help="JSON spec, file path, or shorthand "
                                          "like P^2 / Q_3 / P^1xP^1")
        if with_p:
            sp.add_argument("--p", type=int, default=2, help="prime modulus")
        if with_class:
            sp.add_argument("--class", dest="cls", required=True,
                            help='class JSON, e.g. {"h^1":"1"}')
        sp.add_argument("--convention", choices=["coh", "hom", "cohomological",
                                                 "homological"],
                        default="coh")
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--out", help="write output to a file")

    sp = subs.add_parser("describe", help="print basis, multiplication table, "
                                          "tangent data and tau matrix")
    sp.add_argument("--variety", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_describe)

    sp = subs.add_parser("operate", help="all S_k of one class")
    add_common(sp, with_class=True)
    sp.set_defaults(func=cmd_operate)

    sp = subs.add_parser("table", help="operation table over the whole basis")
    add_common(sp)
    sp.set_defaults(func=cmd_table)

    sp = subs.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", required=True, choices=sorted(SUITES))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--p", type=int)
    sp.add_argument("--variety")
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ExtractionFailure as exc:
        sys.stderr.write("extraction failure: %s\n" % exc)
        sys.stderr.write(json.dumps(exc.details, indent=2, sort_keys=True) + "\n")
        return 3
    except (ChowopsError, ValueError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
