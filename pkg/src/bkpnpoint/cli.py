"""Command line interface.

Three subcommands: ``npoint`` writes connected n-point tables computed
from a coordinate file, ``verify`` runs the identity checks on seeded
random instances (or on a supplied instance), ``convert`` rewrites BKP
coordinates as the KP coordinates of the squared tau-function.

Exit codes: 0 success, 1 mathematical disagreement, 2 input error.
Output is deterministic: identical arguments produce byte-identical
files (JSON with sorted keys, rationals rendered as "p/q" strings).
"""

import argparse
import json
import sys

from .affine import bkp_to_kp, check_gs_relation, dump_affine_kp, load_affine_b
from .fock import (
    check_square_relation,
    check_state_equality,
    oracle_npoint_table,
)
from .lemma import first_lemma_difference, instantiate_from_affine
from .npoint import (
    compare_formulas,
    embedded_npoint_series,
    npoint_table,
    wangyang_npoint_series,
)
from .sampling import random_affine_b, random_series_pair_spec

SCHEMA_VERSION = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bkpnpoint",
        description="Connected n-point functions of BKP tau-functions "
                    "from affine coordinates, with exact verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    np_ = sub.add_parser(
        "npoint", help="write a connected n-point table from a coordinate file"
    )
    np_.add_argument("--coords", required=True,
                     help='coordinate file: JSON list of [n, m, "p/q"] records')
    np_.add_argument("--n", type=int, required=True, help="number of points")
    np_.add_argument("--max-weight", type=int, required=True,
                     help="largest index sum reported")
    np_.add_argument("--formula",
                     choices=("wangyang", "embedded", "oracle", "all"),
                     default="all", help="route(s) to compute (default all)")
    np_.add_argument("--format", choices=("json", "csv"), default="json")
    np_.add_argument("--out", help="output path (default stdout)")
    np_.add_argument("--window-cap", type=int,
                     help="override the positive exponent cap of the series window")
    np_.set_defaults(func=cmd_npoint)

    ver = sub.add_parser(
        "verify", help="run identity checks on seeded random instances"
    )
    pick = ver.add_mutually_exclusive_group(required=True)
    pick.add_argument("--check",
                      choices=("gs", "square", "state", "formulas", "lemma"))
    pick.add_argument("--suite", choices=("full",),
                      help="run every check")
    ver.add_argument("--coords",
                     help="check this instance instead of seeded random ones")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--count", type=int,
                     help="number of seeded instances per check")
    ver.add_argument("--max-weight", "--weight", dest="max_weight", type=int,
                     help="weight / depth / cutoff of the check")
    ver.add_argument("--n", type=int, help="restrict formulas check to one n")
    ver.add_argument("--k", type=int, help="restrict lemma check to one k")
    ver.add_argument("--window-cap", type=int,
                     help="box half-width of the lemma check (default 6)")
    ver.add_argument("--format", choices=("json", "csv"), default="json")
    ver.add_argument("--out", help="output path (default stdout)")
    ver.set_defaults(func=cmd_verify)

    conv = sub.add_parser(
        "convert",
        help="write the KP coordinates of the squared tau-function",
    )
    conv.add_argument("--coords", required=True)
    conv.add_argument("--out", help="output path (default stdout)")
    conv.set_defaults(func=cmd_convert)
    return parser


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _emit(doc: dict, args) -> None:
    if args.format == "json":
        _write(json.dumps(doc, sort_keys=True) + "\n", args.out)
    else:
        _write(_to_csv(doc), args.out)


def _to_csv(doc: dict) -> str:
    lines = []
    if doc["command"] == "npoint":
        lines.append("formula,indices,value")
        for route in sorted(doc["tables"]):
            for record in doc["tables"][route]:
                indices = ":".join(str(i) for i in record["indices"])
                lines.append(f"{route},{indices},{record['value']}")
    else:
        lines.append("check,passed,detail")
        for check in doc["checks"]:
            detail = check["detail"] or ""
            lines.append(f"{check['name']},{str(check['passed']).lower()},{detail}")
    return "\n".join(lines) + "\n"


def _table_records(table: dict) -> list:
    return [
        {"indices": list(key), "value": str(table[key])}
        for key in sorted(table)
    ]


def cmd_npoint(args) -> int:
    if args.n < 1:
        raise ValueError("n must be >= 1")
    if args.max_weight < args.n:
        raise ValueError("max weight must be at least n (indices are odd >= 1)")
    b = load_affine_b(args.coords)
    n, weight = args.n, args.max_weight
    tables = {}
    if args.formula in ("wangyang", "all"):
        series = wangyang_npoint_series(b, n, weight, pos_cap=args.window_cap)
        tables["wangyang"] = npoint_table(series, n, weight, index_shift=0)
    if args.formula in ("embedded", "all"):
        series = embedded_npoint_series(b, n, weight, pos_cap=args.window_cap)
        tables["embedded"] = npoint_table(series, n, weight, index_shift=1)
    if args.formula in ("oracle", "all"):
        tables["oracle"] = oracle_npoint_table(b, n, weight)
    agree, first = _routes_agree(tables)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "npoint",
        "coords": args.coords,
        "n": n,
        "max_weight": weight,
        "formula": args.formula,
        "tables": {route: _table_records(t) for route, t in tables.items()},
        "agree": agree,
        "first_difference": first,
    }
    _emit(doc, args)
    return 0 if agree else 1


def _routes_agree(tables: dict):
    routes = sorted(tables)
    if len(routes) < 2:
        return True, None
    keys = sorted(tables[routes[0]])
    for key in keys:
        values = {route: tables[route][key] for route in routes}
        if len(set(values.values())) > 1:
            return False, {
                "indices": list(key),
                "values": {route: str(v) for route, v in values.items()},
            }
    return True, None


def _seeded_coords(args, count: int):
    if args.coords:
        return [("file", load_affine_b(args.coords))]
    return [
        (args.seed + i, random_affine_b(args.seed + i)) for i in range(count)
    ]


def _check_gs(args):
    depth = args.max_weight or 8
    instances = _seeded_coords(args, args.count or 20)
    params = {"depth": depth, "instances": len(instances)}
    for label, b in instances:
        if not check_gs_relation(b, depth):
            return params, False, f"failed for instance {label}"
    return params, True, None


def _check_square(args):
    weight = args.max_weight or 8
    instances = _seeded_coords(args, args.count or 5)
    params = {"max_weight": weight, "instances": len(instances)}
    for label, b in instances:
        if not check_square_relation(b, weight):
            return params, False, f"failed for instance {label}"
    return params, True, None


def _check_state(args):
    cutoff = args.max_weight or 8
    instances = _seeded_coords(args, args.count or 5)
    params = {"cutoff": cutoff, "instances": len(instances)}
    for label, b in instances:
        if not check_state_equality(b, cutoff):
            return params, False, f"failed for instance {label}"
    return params, True, None


def _check_formulas(args):
    weight = args.max_weight or 9
    ns = (args.n,) if args.n else (1, 2, 3)
    instances = _seeded_coords(args, args.count or 10)
    params = {"max_weight": weight, "n": list(ns),
              "instances": len(instances)}
    for label, b in instances:
        for n in ns:
            result = compare_formulas(b, n, weight)
            if not result.tables_agree:
                return params, False, (
                    f"instance {label} n {n}: tables differ at "
                    f"{result.first_difference}"
                )
            if not result.raw_relation_holds:
                return params, False, (
                    f"instance {label} n {n}: raw series relation broken"
                )
    return params, True, None


def _check_lemma(args):
    window = args.window_cap or 6
    ks = (args.k,) if args.k else (1, 2, 3)
    if args.coords:
        specs = [("file", instantiate_from_affine(load_affine_b(args.coords)))]
    else:
        count = args.count or 20
        specs = [
            (args.seed + i, random_series_pair_spec(args.seed + i))
            for i in range(count)
        ]
    params = {"window": window, "k": list(ks), "instances": len(specs)}
    for label, spec in specs:
        for k in ks:
            diff = first_lemma_difference(k, spec, window)
            if diff is not None:
                exps, lhs, rhs = diff
                return params, False, (
                    f"instance {label} k {k}: sides differ at {list(exps)} "
                    f"({lhs} vs {rhs})"
                )
    return params, True, None


_CHECKS = {
    "gs": _check_gs,
    "square": _check_square,
    "state": _check_state,
    "formulas": _check_formulas,
    "lemma": _check_lemma,
}


def cmd_verify(args) -> int:
    names = list(_CHECKS) if args.suite else [args.check]
    checks = []
    all_passed = True
    for name in names:
        params, passed, detail = _CHECKS[name](args)
        checks.append({
            "name": name,
            "params": params,
            "passed": passed,
            "detail": detail,
        })
        all_passed = all_passed and passed
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "seed": args.seed,
        "checks": checks,
        "passed": all_passed,
    }
    _emit(doc, args)
    return 0 if all_passed else 1


def cmd_convert(args) -> int:
    kp = bkp_to_kp(load_affine_b(args.coords))
    _write(dump_affine_kp(kp), args.out)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
