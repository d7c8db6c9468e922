"""``fracem`` command line.

Exit codes: 0 success, 2 invalid config or arguments, 3 solver instability.
Run outputs go under ``$FRACEM_OUTPUT_ROOT`` (default: the working
directory) unless ``--out`` is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..wavesolver import InstabilityError
from . import analysis, runner
from .config import ConfigError, load

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNSTABLE = 3


def _fmt(value) -> str:
    return "nan" if value is None else format(float(value), ".17g")


def cmd_run(args) -> int:
    cfg = load(args.config)
    directory = runner.output_root(args.out) / cfg["output"]["dir"]
    result = runner.run_scenario(cfg, directory)
    if result.unstable:
        print(
            f"unstable: blow-up at step {result.metadata['failed_step']}; "
            f"partial output in {directory}",
            file=sys.stderr,
        )
        return EXIT_UNSTABLE
    print(directory)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load(args.config)
    try:
        varies = [runner.parse_vary(v) for v in args.vary]
    except ValueError as exc:
        raise ConfigError("--vary", str(exc)) from exc
    root = runner.output_root(args.out) / cfg["output"]["dir"]
    results = runner.sweep(cfg, varies, root, jobs=args.jobs)
    code = EXIT_OK
    for r in results:
        status = r.metadata["status"]
        print(f"{r.directory}\t{status}")
        if status == "unstable":
            code = EXIT_UNSTABLE
    return code


def cmd_fit_tail(args) -> int:
    series = runner.read_series(args.csv, args.col)
    window = None
    if args.t_from is not None or args.t_to is not None:
        default = analysis.default_tail_window(series)
        window = (
            default[0] if args.t_from is None else args.t_from,
            default[1] if args.t_to is None else args.t_to,
        )
    fit = analysis.fit_tail(series, window)
    print(json.dumps({
        "exponent": fit.exponent,
        "intercept": fit.intercept,
        "window": list(fit.window),
        "r_squared": fit.r_squared,
        "samples": fit.samples,
    }, indent=2))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    spec = analysis.spectrum(runner.read_series(args.csv, args.col))
    out = sys.stdout
    out.write("omega,magnitude,phase\n")
    for w, m, p in zip(spec.omega, spec.magnitude, spec.phase):
        out.write(f"{_fmt(w)},{_fmt(m)},{_fmt(p)}\n")
    return EXIT_OK


def cmd_converge(args) -> int:
    cfg = load(args.config)
    table = analysis.convergence_study(cfg, args.levels)
    out = sys.stdout
    out.write("dt,dx,error,order\n")
    for row in table.rows:
        out.write(f"{_fmt(row.dt)},{_fmt(row.dx)},{_fmt(row.error)},{_fmt(row.order)}\n")
    print(f"reference: {table.reference}", file=sys.stderr)
    if not table.monotone:
        print("warning: error sequence is not monotone", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracem",
        description="Fractional-response field simulations and their analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one scenario")
    p.add_argument("config", type=Path)
    p.add_argument("--out", type=Path, help="output root (overrides $FRACEM_OUTPUT_ROOT)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a scenario over parameter lists")
    p.add_argument("config", type=Path)
    p.add_argument(
        "--vary", action="append", required=True, metavar="FIELD=V1,V2",
        help="dotted config field and comma-separated values; repeat for a grid",
    )
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit-tail", help="power-law fit of a late-time tail")
    p.add_argument("csv", type=Path)
    p.add_argument("--col", required=True, help="probe index or column name")
    p.add_argument("--from", dest="t_from", type=float)
    p.add_argument("--to", dest="t_to", type=float)
    p.set_defaults(func=cmd_fit_tail)

    p = sub.add_parser("spectrum", help="DFT magnitude and phase of a column")
    p.add_argument("csv", type=Path)
    p.add_argument("--col", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("converge", help="refinement study of a scenario")
    p.add_argument("config", type=Path)
    p.add_argument("--levels", type=int, default=3)
    p.set_defaults(func=cmd_converge)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except InstabilityError as exc:
        print(f"unstable: {exc} (step {exc.step})", file=sys.stderr)
        return EXIT_UNSTABLE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
