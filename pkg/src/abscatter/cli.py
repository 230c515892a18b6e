"""Command-line front end: ``abscatter point | sweep | check``.

Exit codes: 0 success, 1 truncation failure (point), 2 bad arguments,
3 sweep finished with poisoned rows, 4 a consistency check failed.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import checks
from .partial_wave import (
    DEFAULT_TAIL_TOL,
    ScatteringPoint,
    Statistics,
    TruncationError,
    TruncationPolicy,
    asymptotic_references,
    differential_cross_section,
    total_cross_section,
)
from .sweep import (
    PRESETS,
    GridError,
    SweepGrid,
    SweepRow,
    preset_grids,
    row_to_dict,
    rows_to_csv,
    rows_to_json,
    run_sweeps,
    write_atomic,
    format_number,
)

TAIL_TOL_ENV = "AB_SCATTER_TAIL_TOL"

EXIT_OK = 0
EXIT_TRUNCATION = 1
EXIT_USAGE = 2
EXIT_POISONED = 3
EXIT_CHECK_FAILED = 4


class UsageError(Exception):
    pass


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (math.isfinite(v) and v > 0.0):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return v


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def _add_truncation(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m-max", type=_count, default=None,
                   help="fixed symmetric window m in [-M, M] (default: automatic truncation)")
    p.add_argument("--tail-tol", type=_positive, default=None,
                   help=f"bound on the neglected sum of sin^2(delta) (default: ${TAIL_TOL_ENV} "
                        f"if set, else {DEFAULT_TAIL_TOL:g})")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (default: csv)")
    p.add_argument("--out", default=None, help="output file, written atomically (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abscatter",
        description="Hard-disk plus Aharonov-Bohm flux scattering: cross sections in units of the disk radius a.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("point", help="evaluate one (ka, mu0) point")
    pp.add_argument("--ka", type=_positive, required=True, help="wavenumber times disk radius")
    pp.add_argument("--mu0", type=_finite, default=0.0, help="flux mu0 = -Phi/Phi0 (default: 0)")
    pp.add_argument("--statistics", choices=[s.value for s in Statistics], default="distinguishable",
                    help="particle statistics (default: distinguishable)")
    pp.add_argument("--channels", action="store_true", help="append the per-channel table (m, alpha, delta, sin2)")
    pp.add_argument("--phi", type=_finite, action="append", default=None,
                    help="also print dsigma/dphi at this angle in radians (repeatable)")
    pp.add_argument("--references", action="store_true",
                    help="append the closed-form low/high energy reference cross sections")
    _add_truncation(pp)
    _add_output(pp)

    sp = sub.add_parser("sweep", help="sweep ka or mu0 and tabulate cross sections")
    sp.add_argument("--preset", choices=PRESETS, default=None,
                    help="fig1/3/5: ka log-swept over [0.01, 20] at mu0 in {0, 0.1, 0.25, 0.5, 0.75, 1}; "
                         "fig2/4/6: mu0 swept over [-3, 3] at ka in {0.1, 0.3, 0.5}; "
                         "statistics distinguishable (1, 2), boson (3, 4), fermion (5, 6)")
    sp.add_argument("--axis", choices=("ka", "mu0"), default=None, help="swept parameter")
    sp.add_argument("--from", dest="start", type=_finite, default=None, help="first axis value")
    sp.add_argument("--to", dest="stop", type=_finite, default=None, help="last axis value")
    sp.add_argument("--points", type=_count, default=None,
                    help="number of grid points, >= 2 (default: 200 for ka, 241 for mu0)")
    spacing = sp.add_mutually_exclusive_group()
    spacing.add_argument("--log", dest="spacing", action="store_const", const="log", help="logarithmic spacing")
    spacing.add_argument("--linear", dest="spacing", action="store_const", const="linear",
                         help="linear spacing (default)")
    sp.add_argument("--ka", type=_positive, default=None, help="fixed ka for a mu0 sweep")
    sp.add_argument("--mu0", type=_finite, default=None, help="fixed mu0 for a ka sweep (default: 0)")
    sp.add_argument("--statistics", choices=[s.value for s in Statistics], default=None,
                    help="particle statistics (default: distinguishable)")
    sp.add_argument("--workers", type=_count, default=1, help="worker processes (default: 1)")
    _add_truncation(sp)
    _add_output(sp)

    cp = sub.add_parser("check", help="run the built-in consistency battery")
    cp.add_argument("--ka", type=_positive, default=None, help="check at this ka (with --mu0) instead of the defaults")
    cp.add_argument("--mu0", type=_finite, default=None, help="check at this mu0 (default: 0 when --ka is given)")
    cp.add_argument("--random", type=int, default=0, help="add N random (ka, mu0) points in [0.05, 50] x [-2, 2] (default: 0)")
    cp.add_argument("--seed", type=int, default=0, help="seed for --random (default: 0)")
    return parser


def resolve_tail_tol(flag: float | None, environ=os.environ) -> float:
    """Flag beats environment beats default."""
    if flag is not None:
        return flag
    raw = environ.get(TAIL_TOL_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_TAIL_TOL
    try:
        v = float(raw)
    except ValueError:
        raise UsageError(f"{TAIL_TOL_ENV}={raw!r} is not a number")
    if not (math.isfinite(v) and v > 0.0):
        raise UsageError(f"{TAIL_TOL_ENV}={raw!r} must be positive")
    return v


def _truncation(args) -> TruncationPolicy:
    tol = resolve_tail_tol(args.tail_tol)
    if args.m_max is not None:
        return TruncationPolicy.fixed(args.m_max, tol)
    return TruncationPolicy.auto(tol)


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _csv_block(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(r) for r in rows]
    return "\n".join(lines) + "\n"


def cmd_point(args) -> int:
    trunc = _truncation(args)
    point = ScatteringPoint(args.ka, args.mu0, Statistics(args.statistics), trunc)
    try:
        res = total_cross_section(point)
    except TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    flags = ("tail_above_tol",) if res.tail_bound > trunc.tail_tol else ()
    row = SweepRow(point.ka, point.mu0.mu0, point.statistics.value, res.sigma_t, res.normalized,
                   res.m_used, res.tail_bound, flags)
    diff = []
    if args.phi:
        diff = [(phi, differential_cross_section(point, phi)) for phi in args.phi]
    refs = asymptotic_references(point.ka) if args.references else None

    if args.format == "json":
        record = row_to_dict(row)
        if args.channels:
            record["channels"] = [
                {"m": c.m, "alpha": c.alpha, "delta": c.delta, "sin2": c.sin2} for c in res.channels
            ]
        if diff:
            record["differential"] = [{"phi": p, "dsigma_dphi": v} for p, v in diff]
        if refs is not None:
            record["references"] = {
                "low_energy_sigma": refs.low_energy_sigma,
                "low_energy_valid": refs.low_energy_valid,
                "loglinear_sigma": refs.loglinear_sigma if math.isfinite(refs.loglinear_sigma) else None,
                "high_energy_sigma": refs.high_energy_sigma,
            }
        _emit(json.dumps(record, indent=1) + "\n", args.out)
        return EXIT_OK

    blocks = [rows_to_csv([row])]
    if args.channels:
        blocks.append(_csv_block(("m", "alpha", "delta", "sin2"),
                                 [(str(c.m), format_number(c.alpha), format_number(c.delta), format_number(c.sin2)) for c in res.channels]))
    if diff:
        blocks.append(_csv_block(("phi", "dsigma_dphi"), [(format_number(p), format_number(v)) for p, v in diff]))
    if refs is not None:
        blocks.append(_csv_block(
            ("ka", "low_energy_sigma", "low_energy_valid", "loglinear_sigma", "high_energy_sigma"),
            [(format_number(refs.ka), format_number(refs.low_energy_sigma), str(refs.low_energy_valid).lower(),
              format_number(refs.loglinear_sigma), format_number(refs.high_energy_sigma))]))
    _emit("\n".join(blocks), args.out)
    return EXIT_OK


def _sweep_grids(args) -> list[SweepGrid]:
    trunc = _truncation(args)
    if args.preset:
        clash = [flag for flag, v in (("--axis", args.axis), ("--from", args.start), ("--to", args.stop),
                                      ("--ka", args.ka), ("--mu0", args.mu0),
                                      ("--statistics", args.statistics), ("--log/--linear", args.spacing))
                 if v is not None]
        if clash:
            raise UsageError(f"--preset cannot be combined with {', '.join(clash)}")
        kw = {}
        if args.points is not None:
            kw = {"ka_points": args.points, "mu0_points": args.points}
        return preset_grids(args.preset, trunc, **kw)

    missing = [flag for flag, v in (("--axis", args.axis), ("--from", args.start), ("--to", args.stop))
               if v is None]
    if missing:
        raise UsageError(f"without --preset, {', '.join(missing)} required")
    if args.axis == "ka" and args.ka is not None:
        raise UsageError("--ka is the swept axis; use --from/--to")
    if args.axis == "mu0" and args.mu0 is not None:
        raise UsageError("--mu0 is the swept axis; use --from/--to")
    points = args.points or (200 if args.axis == "ka" else 241)
    return [SweepGrid(
        axis=args.axis,
        start=args.start,
        stop=args.stop,
        points=points,
        spacing=args.spacing or "linear",
        ka=args.ka,
        mu0=(args.mu0 if args.mu0 is not None else 0.0) if args.axis == "ka" else None,
        statistics=Statistics(args.statistics or "distinguishable"),
        truncation=trunc,
    )]


def cmd_sweep(args) -> int:
    grids = _sweep_grids(args)
    rows = run_sweeps(grids, workers=args.workers)
    text = rows_to_json(rows) if args.format == "json" else rows_to_csv(rows)
    _emit(text, args.out)
    bad = [r for r in rows if r.poisoned]
    if bad:
        print(f"warning: {len(bad)} of {len(rows)} rows poisoned", file=sys.stderr)
        return EXIT_POISONED
    return EXIT_OK


def cmd_check(args) -> int:
    if args.random < 0:
        raise UsageError("--random must be >= 0")
    if args.ka is not None:
        points = [(args.ka, args.mu0 if args.mu0 is not None else 0.0)]
    elif args.mu0 is not None:
        raise UsageError("--mu0 needs --ka")
    else:
        points = list(checks.DEFAULT_POINTS)
    points += checks.random_points(args.random, args.seed)
    results = checks.run_battery(points)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    print(f"all {len(results)} checks passed on {len(points)} scattering points")
    return EXIT_OK


COMMANDS = {"point": cmd_point, "sweep": cmd_sweep, "check": cmd_check}


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--flag -1e-3`` into ``--flag=-1e-3``; argparse only spots plain negative decimals."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok.startswith("--") and "=" not in tok and nxt is not None and nxt.startswith("-"):
            try:
                float(nxt)
            except ValueError:
                pass
            else:
                out.append(f"{tok}={nxt}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_negative_values(list(sys.argv[1:] if argv is None else argv)))
    except SystemExit as exc:  # --help, or argparse rejected the flags
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, GridError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
