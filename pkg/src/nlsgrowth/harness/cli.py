"""Command line interface.

Verbs:
  run            execute one experiment from a config file
  sweep          expand sweep.* lists and run the case grid
  fit            least-squares growth exponent of a CSV column
  accept         run the acceptance suite (quick or full)
  export-kernel  write a propagator kernel table as CSV (n, re, im)

Exit codes: 0 success, 2 config error, 3 numerical abort, 4 acceptance failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..lattice import NumericsError
from ..lattice_linear import kernel_table
from .acceptance import acceptance_suite
from .config import ConfigError, parse_config
from .csvio import read_csv, write_csv
from .fitting import fit_growth
from .runner import run_experiment, sweep_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3
EXIT_ACCEPTANCE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlsgrowth",
        description="Lattice/continuum NLS growth experiments",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    run_p = sub.add_parser("run", help="execute one experiment")
    run_p.add_argument("--config", type=Path, required=True)
    run_p.add_argument("--out", type=Path, required=True)
    run_p.add_argument("--seed", type=int, default=None, help="override data.seed")

    sweep_p = sub.add_parser("sweep", help="run a sweep over config lists")
    sweep_p.add_argument("--config", type=Path, required=True)
    sweep_p.add_argument("--out", type=Path, required=True)
    sweep_p.add_argument("--workers", type=int, default=1)
    sweep_p.add_argument("--seed", type=int, default=None, help="override data.seed")

    fit_p = sub.add_parser("fit", help="fit a growth exponent from a series CSV")
    fit_p.add_argument("--csv", type=Path, required=True)
    fit_p.add_argument("--column", default="sup_abs")
    fit_p.add_argument("--t-lo", type=float, required=True)
    fit_p.add_argument("--t-hi", type=float, required=True)

    acc_p = sub.add_parser("accept", help="run the acceptance suite")
    acc_p.add_argument("--level", choices=("quick", "full"), default="quick")
    acc_p.add_argument("--out", type=Path, default=None)

    ker_p = sub.add_parser("export-kernel", help="write K_n(t) as CSV")
    ker_p.add_argument("--t", type=float, required=True)
    ker_p.add_argument("--half-width", type=int, default=None)
    ker_p.add_argument("--out", type=Path, required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.verb == "run":
            config = parse_config(args.config)
            if args.seed is not None:
                config = config.with_overrides(**{"data.seed": args.seed})
            out = run_experiment(config, args.out)
            print(f"run written to {out}")
            return EXIT_OK
        if args.verb == "sweep":
            config = parse_config(args.config)
            if args.seed is not None:
                config = config.with_overrides(**{"data.seed": args.seed})
            out = sweep_experiment(config, args.out, workers=args.workers)
            print(f"sweep written to {out}")
            return EXIT_OK
        if args.verb == "fit":
            data = read_csv(args.csv)
            if args.column not in data:
                raise ConfigError(
                    f"column {args.column!r} not in {sorted(data)} of {args.csv}"
                )
            result = fit_growth(data["t"], data[args.column], (args.t_lo, args.t_hi))
            print(
                f"slope={result.slope:.6f} intercept={result.intercept:.6f} "
                f"rms={result.residual_rms:.3e} n={result.n_points} "
                f"window=[{result.window[0]}, {result.window[1]}]"
            )
            return EXIT_OK
        if args.verb == "accept":
            report = acceptance_suite(level=args.level, out_dir=args.out)
            return EXIT_OK if report.passed else EXIT_ACCEPTANCE
        if args.verb == "export-kernel":
            tab = kernel_table(args.t, args.half_width)
            rows = [
                (int(n), float(v.real), float(v.imag))
                for n, v in zip(tab.ns, tab.values)
            ]
            write_csv(args.out, ["n", "re", "im"], rows)
            print(f"kernel table (t={args.t}, half_width={tab.half_width}) -> {args.out}")
            return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericsError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    raise AssertionError("unreachable verb")


if __name__ == "__main__":
    raise SystemExit(main())
