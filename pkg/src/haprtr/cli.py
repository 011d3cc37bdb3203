"""Command-line interface: generate, solve, experiment, plot.

Exit codes: 0 success, 1 usage or invalid parameters, 2 I/O or malformed
input files, 3 numeric failure inside a solver.
"""

from __future__ import annotations

import argparse
import sys
import time

from .config_io import ExperimentConfig, read_config
from .errors import (
    CsvSchemaError,
    DegenerateInputError,
    InstanceFormatError,
    NumericFailureError,
    ParameterError,
)
from .experiment import run_experiment, write_csv
from .instance_io import read_instance, write_instance
from .methods import METHODS, run_method
from .pipeline import generate_instance, hd_ambiguous
from .plotting import plot_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="haprtr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="write a synthetic HAP1 instance file")
    gen.add_argument("--m", type=int, default=100, help="number of reads (rows)")
    gen.add_argument("--n", type=int, default=120, help="number of SNP sites (columns)")
    gen.add_argument("--pd", type=float, default=0.5, help="observation probability")
    gen.add_argument("--err", type=float, default=0.0, help="fraction of observed entries flipped")
    gen.add_argument("--seed", type=int, default=0, help="generation seed")
    gen.add_argument("--out", required=True, help="output instance path")

    solve = sub.add_parser("solve", help="solve one instance file and print a report")
    solve.add_argument("instance", help="HAP1 instance path")
    solve.add_argument("--method", default="rtr", help=f"one of: {', '.join(sorted(METHODS))}")
    solve.add_argument("--config", help="experiment config supplying solver settings")
    solve.add_argument("--seed", type=int, default=0, help="solver initialization seed")

    exp = sub.add_parser("experiment", help="run a seeded sweep and write a CSV")
    exp.add_argument("--config", required=True, help="experiment config path")
    exp.add_argument("--out", required=True, help="output CSV path")

    plot = sub.add_parser("plot", help="render mean hd vs pd from a results CSV")
    plot.add_argument("csv", help="results CSV path")
    plot.add_argument("--out", required=True, help="output SVG path")

    return parser


def _cmd_generate(args) -> int:
    instance = generate_instance(args.m, args.n, args.pd, args.err, args.seed)
    write_instance(args.out, instance.reads, instance.truth)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    reads, truth = read_instance(args.instance)
    cfg = read_config(args.config) if args.config else ExperimentConfig()
    if args.method not in METHODS:
        registered = ", ".join(sorted(METHODS))
        print(f"haprtr solve: unknown method {args.method!r}; registered methods: {registered}",
              file=sys.stderr)
        return EXIT_USAGE

    start = time.perf_counter()
    outcome = run_method(args.method, reads, cfg, args.seed)
    elapsed_ms = (time.perf_counter() - start) * 1e3

    hd = hd_ambiguous(outcome.haplotype, truth) if truth is not None else None
    print(f"method: {args.method}")
    print(f"hd: {'n/a' if hd is None else hd}")
    print(f"mec: {outcome.mec}")
    print(f"iterations: {outcome.iterations}")
    print(f"grad_norm: {outcome.grad_norm!r}")
    print(f"wall_time_ms: {elapsed_ms:.3f}")
    print(f"haplotype: {outcome.haplotype.to_string()}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    cfg = read_config(args.config)
    records = run_experiment(cfg)
    write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def _cmd_plot(args) -> int:
    plot_csv(args.csv, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "solve": _cmd_solve,
    "experiment": _cmd_experiment,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ParameterError as exc:
        print(f"haprtr: invalid parameter: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InstanceFormatError, CsvSchemaError, DegenerateInputError) as exc:
        print(f"haprtr: bad input: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"haprtr: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericFailureError as exc:
        print(f"haprtr: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
