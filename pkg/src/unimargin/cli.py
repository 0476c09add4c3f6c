"""Command-line front end.

Exit codes: 0 success, 2 parse or validation error, 3 solver did not
converge, 4 odds ratio undefined because of a zero cell.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import family as fam
from .closed_forms import section_residuals, symmetric_3d, uniform_sections_3d, uniformize_2d
from .io import TableDocument, TableFormatError, atomic_write_text, dump_json, fixture_path, load_table
from .plot import bubble_svg
from .solvers import ConvergenceError, SolverConfig, solve_ipf, solve_newton
from .tables import (
    ConsistencyError,
    EmptyTableError,
    Table2,
    ZeroCellError,
    dependence_profile,
    margins,
    normalize,
    odds_ratio_2x2,
    odds_ratio_3d,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_CONVERGENCE = 3
EXIT_ZERO_CELL = 4

METHODS = ("closed", "ipf", "newton", "sections")


class UsageError(ValueError):
    pass


def resolve_path(arg: str) -> Path:
    """A path on disk, or else the name of a bundled fixture such as ``yule``."""
    path = Path(arg)
    if path.exists():
        return path
    bundled = fixture_path(path.name)
    if bundled.exists():
        return bundled
    return path


def _cell_names(doc: TableDocument) -> list[str]:
    names = []
    for pos in range(2**doc.dims):
        idx = [(pos >> (doc.dims - 1 - m)) & 1 for m in range(doc.dims)]
        levels = ", ".join(doc.level_labels[m][i] for m, i in enumerate(idx))
        names.append(f"p{''.join(map(str, idx))} ({levels})")
    return names


def _f3(v: float) -> str:
    return f"{v:.3f}"


# -- inspect -----------------------------------------------------------------


def cmd_inspect(doc: TableDocument) -> dict:
    t = doc.to_table()
    report = {
        "dims": doc.dims,
        "kind": doc.kind,
        "axis_labels": list(doc.axis_labels),
        "level_labels": [list(lv) for lv in doc.level_labels],
        "grand_total": t.total,
        "cells": list(doc.cells),
        "relative_frequencies": [float(v) for v in normalize(t).flat],
        "margins": [list(m) for m in margins(normalize(t))],
    }
    if not t.is_positive():
        report["odds_ratios"] = None
        report["notice"] = "odds ratios undefined (zero cell)"
    elif doc.dims == 2:
        report["odds_ratios"] = {"omega": odds_ratio_2x2(t)}
    else:
        report["odds_ratios"] = dependence_profile(t).as_dict()
    return report


def render_inspect(report: dict) -> str:
    dims = report["dims"]
    doc = TableDocument(
        dims,
        tuple(report["axis_labels"]),
        tuple(tuple(lv) for lv in report["level_labels"]),
        tuple(report["cells"]),
        report["kind"],
    )
    lines = [f"table: {'x'.join(['2'] * dims)} {report['kind']}, grand total {report['grand_total']:g}"]
    lines.append("axes:")
    for name, lv in zip(report["axis_labels"], report["level_labels"]):
        lines.append(f"  {name}: 0={lv[0]}, 1={lv[1]}")
    lines.append("relative frequencies:")
    for name, v in zip(_cell_names(doc), report["relative_frequencies"]):
        lines.append(f"  {name:<40} {_f3(v)}")
    lines.append("margins (level 0, level 1):")
    for name, m in zip(report["axis_labels"], report["margins"]):
        lines.append(f"  {name:<20} {_f3(m[0])} {_f3(m[1])}")
    ors = report["odds_ratios"]
    if ors is None:
        lines.append(report["notice"])
    elif dims == 2:
        lines.append(f"odds ratio: {_f3(ors['omega'])}")
    else:
        lines.append("dependence profile:")
        for key, v in ors.items():
            label = "omega3" if key == "omega3" else f"w{key}"
            lines.append(f"  {label:<8} {_f3(v)}")
    return "\n".join(lines)


# -- uniformize --------------------------------------------------------------


def _profile_or_none(t):
    return dependence_profile(t).as_dict() if t.is_positive() else None


def cmd_uniformize(doc: TableDocument, method: str, config: SolverConfig = SolverConfig()):
    """Transform ``doc`` to uniform margins; returns the new document and a summary."""
    if method not in METHODS:
        raise UsageError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    t = doc.to_table()
    if doc.dims == 2 and method != "closed":
        raise UsageError(f"method {method!r} needs a 2x2x2 table; use 'closed' for 2x2 tables")
    summary = {"method": method}

    if doc.dims == 2:
        omega = odds_ratio_2x2(t)
        out = uniformize_2d(omega).table(labels=t.labels)
        summary.update(
            iterations=0,
            final_residual=float(max(abs(m - 0.5) for pair in margins(out) for m in pair)),
            before={"omega": omega},
            after={"omega": odds_ratio_2x2(out)},
        )
    elif method in ("closed", "sections"):
        omega = odds_ratio_3d(t)
        out = symmetric_3d(omega) if method == "closed" else uniform_sections_3d(omega)
        out = type(out)(out.cells, kind=out.kind, labels=t.labels)
        summary.update(
            iterations=0,
            final_residual=float(section_residuals(out, omega).max()),
            before=dependence_profile(t).as_dict(),
            after=dependence_profile(out).as_dict(),
        )
    else:
        if method == "ipf":
            report = solve_ipf(t, config)
        else:
            if not t.is_positive():
                raise ZeroCellError("zero cell: odds ratio undefined")
            report = solve_newton(dependence_profile(t), config, initial=t)
        out = report.solution
        summary.update(
            iterations=report.iterations,
            final_residual=report.final_residual,
            before=report.profile_in.as_dict(),
            after=report.profile_out.as_dict(),
        )
    meta = {k: v for k, v in doc.meta.items() if k in ("source", "display_order")}
    meta["transform"] = method
    return TableDocument.from_table(out, meta=meta), summary


def render_uniformize(doc: TableDocument, summary: dict) -> str:
    lines = [f"method: {summary['method']}  iterations: {summary['iterations']}  "
             f"residual: {summary['final_residual']:.3e}"]
    lines.append("transformed table:")
    for name, v in zip(_cell_names(doc), doc.cells):
        lines.append(f"  {name:<40} {_f3(v)}")
    lines.append(f"  {'odds ratio':<12} {'before':>10} {'after':>10}")
    for key, v in summary["before"].items():
        label = key if key in ("omega", "omega3") else f"w{key}"
        lines.append(f"  {label:<12} {_f3(v):>10} {_f3(summary['after'][key]):>10}")
    return "\n".join(lines)


# -- family ------------------------------------------------------------------


def _point_dict(fp) -> dict:
    resid = fam.family_residuals(fp.table, fp.omega)
    return {
        "free": list(fp.free),
        "omega": fp.omega,
        "branch": fp.branch,
        "cells": [float(v) for v in fp.table.flat],
        "residuals": {
            "log_odds_ratio": float(resid[0]),
            "total": float(resid[1]),
            "margin_X1": float(resid[2]),
            "margin_X2": float(resid[3]),
            "margin_X3": float(resid[4]),
        },
        "max_residual": fam.verify_family_point(fp),
    }


def cmd_family(omega: float, n: int | None = None, seed: int | None = None, free=None) -> list[dict]:
    if not omega > 0:
        raise UsageError("--omega must be positive")
    if free is not None:
        points = fam.complete_table(free, omega)
    else:
        points = fam.sample_family(omega, 5 if n is None else n, 0 if seed is None else seed)
    return [_point_dict(fp) for fp in points]


# -- plot --------------------------------------------------------------------


def cmd_plot(before: TableDocument, after: TableDocument, out_path) -> str:
    if before.dims != 2 or after.dims != 2:
        raise UsageError("bubble plot supports 2×2 tables only")
    svg = bubble_svg(before.to_table(), after.to_table())
    atomic_write_text(out_path, svg)
    return svg


# -- entry point -------------------------------------------------------------


def _parse_free(text: str):
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--free expects three comma-separated numbers, got {text!r}") from None
    if len(vals) != 3:
        raise UsageError(f"--free expects three comma-separated numbers, got {len(vals)}")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unimargin",
        description="Uniform-margin transforms of 2x2 and 2x2x2 contingency tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="margins and odds ratios of a table")
    p.add_argument("file", help="JSON or CSV table, or a bundled fixture name (yule, agresti, fienberg)")
    p.add_argument("--format", choices=("auto", "json", "csv"), default="auto")
    p.add_argument("--json", action="store_true", help="print the report as JSON")

    p = sub.add_parser("uniformize", help="transform a table to uniform margins")
    p.add_argument("file")
    p.add_argument("--format", choices=("auto", "json", "csv"), default="auto")
    p.add_argument("--method", choices=METHODS, default="ipf")
    p.add_argument("--tol", type=float, default=1e-12, help="margin / residual tolerance")
    p.add_argument("--max-iter", type=int, default=10000)
    p.add_argument("--damping", type=float, default=1.0, help="Newton step scale in (0, 1]")
    p.add_argument("--out", help="write the transformed table document here")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("family", help="members of the uniform-margin family for a given omega3")
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--free", help="p000,p001,p010")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("plot", help="two-panel SVG bubble plot of 2x2 tables")
    p.add_argument("before")
    p.add_argument("after")
    p.add_argument("--out", required=True)
    return parser


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def run(args) -> int:
    if args.command == "inspect":
        doc = load_table(resolve_path(args.file), args.format)
        report = cmd_inspect(doc)
        print(_dump(report) if args.json else render_inspect(report))
    elif args.command == "uniformize":
        doc = load_table(resolve_path(args.file), args.format)
        try:
            config = SolverConfig(margin_tolerance=args.tol, newton_tolerance=args.tol,
                                  max_iterations=args.max_iter, damping=args.damping)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out, summary = cmd_uniformize(doc, args.method, config)
        if args.out:
            atomic_write_text(args.out, dump_json(out))
        if args.json:
            print(_dump({"table": out.to_json_dict(), "summary": summary}))
        else:
            print(render_uniformize(out, summary))
    elif args.command == "family":
        if args.free is not None and (args.n is not None or args.seed is not None):
            raise UsageError("--free cannot be combined with --n/--seed")
        free = _parse_free(args.free) if args.free is not None else None
        print(_dump(cmd_family(args.omega, args.n, args.seed, free)))
    elif args.command == "plot":
        before = load_table(resolve_path(args.before))
        after = load_table(resolve_path(args.after))
        cmd_plot(before, after, args.out)
        print(f"wrote {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except ZeroCellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ZERO_CELL
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (TableFormatError, UsageError, EmptyTableError, fam.InfeasibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
