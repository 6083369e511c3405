"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 bad flags, 3 oracle size refused.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import mpmath

from . import __version__
from .asymptotics import GROWTH_CSV_HEADER, RootEquation, solve_growth
from .diagram import (
    INF,
    OracleSizeError,
    StructureClass,
    classify,
    count_by_arcs,
    enumerate_class,
    format_diagram,
    core_map,
    read_diagram,
    stack_decompose,
)
from .enumeration import count_table
from .golden import TABLE_IDS, verify_table
from .series import GFRecipe, gf_k2sigma, gf_k4sigma


class UsageError(Exception):
    pass


def _emit_rows(fields, rows, fmt, out, meta=None):
    if fmt == "json":
        doc = dict(meta or {})
        doc["rows"] = [dict(zip(fields, r)) for r in rows]
        json.dump(doc, out, indent=1)
        out.write("\n")
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(fields)
    writer.writerows(rows)


def _count_series(k, sigma, lam, n_max):
    if lam == 4:
        return gf_k4sigma(k, sigma, max(n_max, 1)).to_ints()[: n_max + 1]
    return gf_k2sigma(k, sigma, max(n_max, 1)).to_ints()[: n_max + 1]


def cmd_count(args, out):
    k, sigma, lam = args.k, args.sigma, args.lam
    if k < 2:
        raise UsageError("--k must be >= 2")
    if lam == 4 and sigma < 3:
        raise UsageError("--lambda 4 needs --sigma >= 3")
    if args.n_max < args.n_min or args.n_min < 0:
        raise UsageError("need 0 <= --n-min <= --n-max")
    if args.per_h and lam != 4:
        raise UsageError("--per-h is only available with --lambda 4")
    if args.per_h and args.method == "series":
        raise UsageError("--per-h needs --method formula")
    method = args.method
    if lam == 2 and sigma > 1:
        method = "series"
    meta = {"k": k, "sigma": sigma, "lambda": lam, "method": method}
    if args.per_h:
        table = count_table("T4sigma", args.n_max, k=k, sigma=sigma, per_h=True, n_min=args.n_min)
        rows = [(n, h, c) for (n, h), c in sorted(table.entries.items())]
        _emit_rows(("n", "h", "count"), rows, args.format, out, meta)
        return 0
    if method == "series":
        values = _count_series(k, sigma, lam, args.n_max)
        rows = [(n, values[n]) for n in range(args.n_min, args.n_max + 1)]
    else:
        kind = "T4sigma" if lam == 4 else "Tk21"
        table = count_table(kind, args.n_max, k=k, sigma=sigma, n_min=args.n_min)
        rows = table.series()
    _emit_rows(("n", "count"), rows, args.format, out, meta)
    return 0


def cmd_series(args, out):
    if args.order < 1:
        raise UsageError("--order must be >= 1")
    if args.lam == 4 and args.sigma < 3:
        raise UsageError("--lambda 4 needs --sigma >= 3")
    kind = "k4sigma" if args.lam == 4 else "k2sigma"
    recipe = GFRecipe(kind, k=args.k, sigma=args.sigma, order=args.order)
    s = recipe.evaluate()
    if args.format == "dump":
        out.write(s.dump(recipe.id))
        return 0
    rows = [(n, str(c)) for n, c in enumerate(s)]
    _emit_rows(("n", "coefficient"), rows, args.format, out, {"recipe": recipe.id})
    return 0


def cmd_growth(args, out):
    try:
        eq = RootEquation(args.kind, args.k, args.sigma)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    result = solve_growth(eq, tol=args.tol)
    row = result.row()
    if args.format == "json":
        doc = dict(row)
        for key in ("gamma", "rate", "residual"):
            doc[key] = float(doc[key])
        doc["dominance_verified"] = result.dominance_verified
        doc["note"] = result.note
        json.dump([doc], out, indent=1)
        out.write("\n")
    else:
        writer = csv.DictWriter(out, fieldnames=GROWTH_CSV_HEADER, lineterminator="\n")
        writer.writeheader()
        writer.writerow(row)
    return 0


def _fmt_inf(value):
    return "inf" if value == INF else str(int(value))


def cmd_classify(args, out):
    d = read_diagram(args.infile)
    k, lam, sigma = classify(d)
    stacks = stack_decompose(d).stacks
    core = core_map(d)
    if args.format == "json":
        doc = {
            "n": d.n,
            "arcs": [list(a) for a in d.arcs],
            "k": k,
            "lambda": None if lam == INF else int(lam),
            "sigma": None if sigma == INF else int(sigma),
            "stacks": [{"length": s.length, "arcs": [list(a) for a in s.arcs]} for s in stacks],
            "core": {"n": core.n, "arcs": [list(a) for a in core.arcs]},
        }
        json.dump(doc, out, indent=1)
        out.write("\n")
        return 0
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("n", "arcs", "k", "lambda", "sigma"))
    writer.writerow((d.n, len(d), k, _fmt_inf(lam), _fmt_inf(sigma)))
    out.write("# stacks\n")
    writer.writerow(("stack", "length", "arcs"))
    for idx, s in enumerate(stacks, start=1):
        writer.writerow((idx, s.length, ";".join(f"{i}-{j}" for i, j in s.arcs)))
    out.write("# core\n")
    out.write(format_diagram(core))
    return 0


def cmd_oracle(args, out):
    try:
        c = StructureClass(args.k, args.lam, args.sigma)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    members = enumerate_class(args.n, c)
    meta = {"k": args.k, "sigma": args.sigma, "lambda": args.lam, "method": "brute force"}
    if args.per_h:
        rows = [(args.n, h, c) for h, c in sorted(count_by_arcs(members).items())]
        _emit_rows(("n", "h", "count"), rows, args.format, out, meta)
    else:
        _emit_rows(("n", "count"), [(args.n, len(members))], args.format, out, meta)
    return 0


def cmd_verify(args, out):
    tables = TABLE_IDS if args.table == "all" else (args.table,)
    checks = [c for t in tables for c in verify_table(t)]
    rows = [(c.table, c.key, c.expected, c.computed, str(c.ok).lower()) for c in checks]
    _emit_rows(("table", "key", "expected", "computed", "ok"), rows, args.format, out)
    bad = [c for c in checks if not c.ok]
    print(
        f"{len(checks) - len(bad)}/{len(checks)} entries match", file=sys.stderr
    )
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pseudoknot",
        description="Exact and asymptotic enumeration of k-noncrossing RNA structures.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    def fmt(sp, choices=("csv", "json")):
        sp.add_argument("--format", choices=choices, default="csv")

    sp = sub.add_parser("count", help="exact structure counts")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--sigma", type=int, default=1)
    sp.add_argument("--lambda", dest="lam", type=int, choices=(2, 4), required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--n-min", type=int, default=0)
    sp.add_argument("--per-h", action="store_true", help="split counts by number of arcs")
    sp.add_argument("--method", choices=("formula", "series"), default="formula")
    fmt(sp)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("series", help="generating-function coefficients")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--sigma", type=int, required=True)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=int, choices=(2, 4), default=4)
    fmt(sp, ("csv", "json", "dump"))
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("growth", help="dominant singularity and growth rate")
    sp.add_argument("--kind", choices=("k21", "k41", "k2sigma", "k4sigma"), required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--sigma", type=int)
    sp.add_argument("--tol", type=float, default=1e-12)
    fmt(sp)
    sp.set_defaults(func=cmd_growth)

    sp = sub.add_parser("classify", help="classify a diagram file")
    sp.add_argument("--in", dest="infile", required=True)
    fmt(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("oracle", help="brute-force structure count")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--sigma", type=int, default=1)
    sp.add_argument("--lambda", dest="lam", type=int, default=1)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--per-h", action="store_true")
    fmt(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("verify", help="recompute a reference table")
    sp.add_argument("--table", choices=TABLE_IDS + ("all",), required=True)
    fmt(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = io.StringIO()
    try:
        code = args.func(args, out)
    except UsageError as exc:
        print(f"pseudoknot {args.verb}: {exc}", file=sys.stderr)
        return 2
    except OracleSizeError as exc:
        print(f"pseudoknot {args.verb}: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError, ArithmeticError) as exc:
        print(f"pseudoknot {args.verb}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out.getvalue())
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
