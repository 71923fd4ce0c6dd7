"""Command-line front end.

    illum meanwidth --dim 6 --subdivisions 1000000
    illum theta --dim 10 --method rogers
    illum bound --dim 5 --symmetric
    illum tables --format csv --out tables.csv

Exit codes: 0 success, 2 usage or domain error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .covering import (
    DEFAULT_GRID,
    OVERRIDE_ENV,
    NotAvailableError,
    rogers_rn,
    theta_anstar,
    theta_best,
    theta_catalog,
    theta_external,
    overrides_from_env,
)
from .enclosure import DEFAULT_PREC, MIN_PREC, DomainError, Enclosure, ceil_decimal, floor_decimal
from .geometry import BodyClass
from .hadwiger import (
    GENERAL_PLANS,
    UnsupportedPlanError,
    best_bound,
    external_bound,
    john_bound,
    rogers_bound,
)
from .meanwidth import DEFAULT_CUTOFF, DEFAULT_SUBDIVISIONS, QuadratureParams, simplex_mean_widths

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 2, 3
DEFAULT_DIGITS = 6
TABLE_DIMS = range(3, 15)
FORMATS = ("text", "csv", "json")


class UsageError(ValueError):
    pass


@dataclass
class OutputRecord:
    quantity: str  # mean_width | theta | hadwiger | rogers_r
    n: int
    cls: str | None
    value_lo: str
    value_hi: str
    integer: int | None
    method: str
    params: dict
    trace: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "n": self.n,
            "cls": self.cls,
            "value_lo": self.value_lo,
            "value_hi": self.value_hi,
            "integer": self.integer,
            "method": self.method,
            "params": self.params,
            "trace": self.trace,
        }


def _bounds(e: Enclosure, digits: int) -> tuple[str, str]:
    return floor_decimal(e.lo_fraction(), digits), ceil_decimal(e.hi_fraction(), digits)


def _params(args, **used) -> dict:
    """Every input that can change the printed numbers."""
    return {
        "precision_bits": args.precision,
        "cutoff_a": str(args.cutoff) if "cutoff" in used else None,
        "subdivisions_N": args.subdivisions if "subdivisions" in used else None,
        "grid_N": args.grid if "grid" in used else None,
        "digits": args.digits,
        "density_override": os.environ.get(OVERRIDE_ENV) if "overrides" in used else None,
    }


def _check_range(name: str, n: int, lo: int, hi: int) -> None:
    if not lo <= n <= hi:
        raise UsageError(f"{name}: --dim must be in [{lo}, {hi}], got {n}")


def _quadrature(args) -> QuadratureParams:
    return QuadratureParams(args.cutoff, args.subdivisions)


# -- subcommands ------------------------------------------------------------

def cmd_meanwidth(args) -> OutputRecord:
    _check_range("meanwidth", args.dim, 1, 16)
    res = simplex_mean_widths([args.dim], _quadrature(args), args.precision)[args.dim]
    lo, hi = _bounds(res.width, args.digits)
    trace = [f"integral of g_{args.dim + 1} in [{', '.join(_bounds(res.integral, args.digits))}]"]
    return OutputRecord("mean_width", args.dim, None, lo, hi, None, "riemann",
                        _params(args, cutoff=1, subdivisions=1), trace)


def cmd_theta(args) -> OutputRecord:
    n, method = args.dim, args.method
    _check_range("theta", n, 2, 14)
    if method == "rogers":
        if n < 3:
            raise UsageError("theta: the Rogers bound is tabulated for n >= 3")
        rr = rogers_rn(n, args.grid, args.precision)
        lo, hi = _bounds(rr.r, args.digits)
        return OutputRecord("rogers_r", n, None, lo, hi, None, "rogers", _params(args, grid=1),
                            [f"minimizer x = {rr.best_j}/({rr.grid_N}*{n})"])
    overrides = overrides_from_env()
    if method == "anstar":
        tb = theta_anstar(n, args.precision)
    elif method == "catalog":
        tb = theta_catalog(n, args.precision, overrides)
    elif method == "external":
        tb = theta_external(n, args.precision)
    else:
        tb = theta_best(n, args.precision, overrides)
    lo, hi = _bounds(tb.value, args.digits)
    return OutputRecord("theta", n, None, lo, hi, None, tb.method, _params(args, overrides=1))


def _bound_for(args, n: int, cls: BodyClass, mw=None):
    method = args.method
    if method == "rogers":
        return rogers_bound(n, cls, args.precision, args.grid)
    if method == "external":
        return external_bound(n, cls, args.precision)
    overrides = overrides_from_env()
    if method == "john":
        return john_bound(n, cls, args.precision, _quadrature(args), args.plan, overrides, mw)
    return best_bound(n, cls, args.precision, _quadrature(args), args.grid, overrides, args.plan, mw)


def cmd_bound(args) -> OutputRecord:
    _check_range("bound", args.dim, 3, 64)
    cls = BodyClass.SYMMETRIC if args.symmetric else BodyClass.GENERAL
    b = _bound_for(args, args.dim, cls)
    lo, hi = _bounds(b.real_bound, args.digits)
    return OutputRecord("hadwiger", b.n, cls.value, lo, hi, b.integer_bound, b.method,
                        _params(args, cutoff=1, subdivisions=1, grid=1, overrides=1), list(b.plan_trace))


def build_tables(args) -> dict:
    """Rows of the three tables for 3 <= n <= 14, in fixed order."""
    general_dims = [n for n in TABLE_DIMS if n in GENERAL_PLANS]
    mws = simplex_mean_widths(general_dims, _quadrature(args), args.precision)
    tables = {}
    for key, cls in (("table1", BodyClass.GENERAL), ("table2", BodyClass.SYMMETRIC)):
        rows = []
        for n in TABLE_DIMS:
            b = best_bound(n, cls, args.precision, _quadrature(args), args.grid,
                           overrides_from_env(), args.plan, mws.get(n))
            comment = b.plan_trace[0].removeprefix("external: ") if b.method == "external" else ""
            rows.append({"n": n, "bound": b.integer_bound, "method": b.method, "comment": comment})
        tables[key] = rows
    tables["table3"] = [
        {"n": n, "r_hi": ceil_decimal(rogers_rn(n, args.grid, args.precision).r.hi_fraction(), args.digits)}
        for n in TABLE_DIMS
    ]
    return tables


def cmd_tables(args) -> dict:
    return {"params": _params(args, cutoff=1, subdivisions=1, grid=1, overrides=1), **build_tables(args)}


# -- rendering ----------------------------------------------------------------

TABLE_TITLES = {
    "table1": ("Upper bounds on H_n", ["n", "H_n", "method", "comment"]),
    "table2": ("Upper bounds on H_n^s", ["n", "H_n^s", "method", "comment"]),
    "table3": ("Upper bounds on r_n (max covering density)", ["n", "r_hi"]),
}
RECORD_FIELDS = ["quantity", "n", "cls", "value_lo", "value_hi", "integer", "method"]
PARAM_FIELDS = ["precision_bits", "cutoff_a", "subdivisions_N", "grid_N", "digits", "density_override"]


def _blank(v) -> str:
    return "" if v is None else str(v)


def render_record(rec: OutputRecord, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rec.as_dict(), separators=(",", ":")) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RECORD_FIELDS + PARAM_FIELDS)
        d = rec.as_dict()
        w.writerow([_blank(d[k]) for k in RECORD_FIELDS] + [_blank(rec.params[k]) for k in PARAM_FIELDS])
        return buf.getvalue()
    label = rec.quantity if rec.cls is None else f"{rec.quantity} ({rec.cls})"
    lines = [f"{label}, n = {rec.n}, method = {rec.method}",
             f"  enclosure: [{rec.value_lo}, {rec.value_hi}]"]
    if rec.integer is not None:
        lines.append(f"  integer bound: {rec.integer}")
    lines += [f"  {t}" for t in rec.trace]
    lines.append("  params: " + ", ".join(f"{k}={v}" for k, v in rec.params.items() if v is not None))
    return "\n".join(lines) + "\n"


def render_tables(data: dict, fmt: str) -> str:
    keys = ["table1", "table2", "table3"]
    if fmt == "json":
        return json.dumps({k: data[k] for k in ["params"] + keys}, separators=(",", ":")) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["parameter", "value"])
        for k in PARAM_FIELDS:
            w.writerow([k, _blank(data["params"][k])])
        for key in keys:
            buf.write("\n")
            _, cols = TABLE_TITLES[key]
            w.writerow(cols)
            for row in data[key]:
                w.writerow([_blank(v) for v in row.values()])
        return buf.getvalue()
    out = []
    for key in keys:
        title, cols = TABLE_TITLES[key]
        rows = [[_blank(v) for v in row.values()] for row in data[key]]
        widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
        out.append(title)
        out.append("  ".join(c.rjust(wd) if i < 2 else c.ljust(wd) for i, (c, wd) in enumerate(zip(cols, widths))).rstrip())
        for r in rows:
            out.append("  ".join(v.rjust(wd) if i < 2 else v.ljust(wd) for i, (v, wd) in enumerate(zip(r, widths))).rstrip())
        out.append("")
    out.append("params: " + ", ".join(f"{k}={v}" for k, v in data["params"].items() if v is not None))
    return "\n".join(out) + "\n"


# -- argument parsing ---------------------------------------------------------

def _precision(text: str) -> int:
    p = int(text)
    if p < MIN_PREC:
        raise argparse.ArgumentTypeError(f"precision must be at least {MIN_PREC} bits")
    return p


def _cutoff(text: str) -> Fraction:
    try:
        a = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if a <= 2:
        raise argparse.ArgumentTypeError("cutoff must exceed 2")
    return a


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _grid(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("grid size must be at least 2")
    return v


def _add_global(p: argparse.ArgumentParser, suppress: bool) -> None:
    # repeated on subparsers so the flags may follow the subcommand too
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--precision", type=_precision, default=d(DEFAULT_PREC),
                   help=f"working precision in bits (default {DEFAULT_PREC})")
    p.add_argument("--format", choices=FORMATS, default=d("text"), help="output format (default text)")
    p.add_argument("--out", default=d(None), help="write output to this path instead of stdout")
    p.add_argument("--digits", type=_positive_int, default=d(DEFAULT_DIGITS),
                   help=f"decimal digits printed; lo rounds down, hi rounds up (default {DEFAULT_DIGITS})")


def _add_quadrature(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cutoff", type=_cutoff, default=DEFAULT_CUTOFF,
                   help=f"quadrature cutoff a > 2 (default {DEFAULT_CUTOFF})")
    p.add_argument("--subdivisions", type=_positive_int, default=DEFAULT_SUBDIVISIONS,
                   help=f"Riemann subdivisions N (default {DEFAULT_SUBDIVISIONS})")


def _add_grid(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", type=_grid, default=DEFAULT_GRID,
                   help=f"Rogers grid size N (default {DEFAULT_GRID})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="illum",
        description="Certified upper bounds on Hadwiger covering numbers.",
        epilog=f"Environment: {OVERRIDE_ENV}=<path> supplies 'n value' covering-density overrides.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("meanwidth", help="certified mean width of the unit-edge regular simplex")
    p.add_argument("--dim", type=int, required=True, help="dimension n (1..16)")
    _add_quadrature(p)
    _add_global(p, suppress=True)
    p.set_defaults(func=cmd_meanwidth)

    p = sub.add_parser("theta", help="covering density upper bounds")
    p.add_argument("--dim", type=int, required=True, help="dimension n (2..14)")
    p.add_argument("--method", choices=("best", "anstar", "catalog", "rogers", "external"), default="best",
                   help="density source (default best: smallest ball-covering bound)")
    _add_grid(p)
    _add_global(p, suppress=True)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("bound", help="integer upper bound on the Hadwiger number")
    p.add_argument("--dim", type=int, required=True, help="dimension n (>= 3)")
    p.add_argument("--symmetric", action="store_true", help="centrally symmetric bodies")
    p.add_argument("--method", choices=("best", "john", "rogers", "external"), default="best",
                   help="bound source (default best)")
    p.add_argument("--plan", choices=("paper", "auto"), default="paper",
                   help="quermassintegral plan for the John route (default: paper, the reference plan)")
    _add_quadrature(p)
    _add_grid(p)
    _add_global(p, suppress=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("tables", help="bound tables for 3 <= n <= 14")
    p.add_argument("--plan", choices=("paper", "auto"), default="paper",
                   help="quermassintegral plan for the John route (default: paper, the reference plan)")
    _add_quadrature(p)
    _add_grid(p)
    _add_global(p, suppress=True)
    p.set_defaults(func=cmd_tables)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        result = args.func(args)
    except OSError as exc:  # e.g. unreadable override file
        print(f"illum: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, DomainError, NotAvailableError, UnsupportedPlanError, ValueError) as exc:
        print(f"illum {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render_tables(result, args.format) if isinstance(result, dict) else render_record(result, args.format)
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"illum: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
