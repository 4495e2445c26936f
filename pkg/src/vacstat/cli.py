"""Command-line entry point: ``vacstat <command> [options]``.

Exit codes: 0 every check passed, 1 a check failed, 2 usage or
configuration error (including an unknown space name).
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import InvalidParams, UnknownSpace, VacstatError
from .ode import TRACE_COLUMNS
from .report import trace_csv
from .suite import COMMANDS, ODE_TOL, TOL, RunConfig, run

NEEDS_SPACE = {"verify", "identities"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vacstat", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--space", help="catalog space name (verify, identities)")
    p.add_argument("--samples", type=int, default=None, help="sample count (default 64; sds-scan 32)")
    p.add_argument("--tol", type=float, default=None,
                   help=f"analytic tolerance (default {TOL:g}, or $VSS_TOL)")
    p.add_argument("--ode-tol", type=float, default=ODE_TOL, help="tolerance for ODE-built spaces")
    p.add_argument("--seed", type=int, default=0, help="Halton scrambling seed")
    p.add_argument("--json", metavar="PATH", help="write the report as JSON")
    p.add_argument("--csv", metavar="PATH", help="write the trace as CSV (ode-trace, sds-scan)")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--R", type=float, default=2.0)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--c0", type=float, default=0.3)
    p.add_argument("--h0", type=float, default=None, help="initial h (ode-trace)")
    p.add_argument("--v0", type=float, default=0.0, help="initial h' (ode-trace)")
    p.add_argument("--span", type=float, default=None, help="integration length (ode-trace)")
    p.add_argument("--fd", action="store_true",
                   help="use finite-difference curvature for the catalog value checks")
    p.add_argument("--quiet", action="store_true", help="print only the summary line")
    return p


def _default_tol(arg: float | None) -> float:
    if arg is not None:
        return arg
    env = os.environ.get("VSS_TOL")
    if env is None:
        return TOL
    try:
        return float(env)
    except ValueError:
        raise InvalidParams(f"VSS_TOL={env!r} is not a number") from None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in NEEDS_SPACE and not args.space:
            raise InvalidParams(f"{args.command} needs --space")
        samples = args.samples if args.samples is not None else (32 if args.command == "sds-scan" else 64)
        cfg = RunConfig(args.command, args.space, samples, _default_tol(args.tol), args.ode_tol,
                        args.seed, args.n, args.R, args.k, args.c0, args.h0, args.v0, args.span,
                        args.fd)
        report, rows = run(cfg)
    except (UnknownSpace, InvalidParams, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"vacstat: error: {msg}", file=sys.stderr)
        return 2
    except VacstatError as exc:
        print(f"vacstat: check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    if not args.quiet:
        for line in report.lines():
            print(line)
    failed = len(report.failed)
    print(f"{len(report.checks)} checks, {failed} failed"
          + (f", {report.timing['total_s']:.1f} s" if "total_s" in report.timing else ""))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    if args.csv and rows is not None:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(trace_csv(rows, TRACE_COLUMNS))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
