"""Command-line entry point: single solves and benchmark suites.

Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .bench import METHODS, dump_routes, run_suite, solve_once, worker_count
from .grasp import SolverConfig
from .instance import (
    DEFAULT_PROB_SEED,
    Instance,
    ProbabilityFileError,
    TsplibParseError,
    load_probabilities,
    parse_tsplib,
)
from .objective import CoverageError, SolutionError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract wants 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_beta(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"beta must be comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("beta must not be empty")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mdsearch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve one instance and print the cost")
    solve.add_argument("--instance", required=True, help="TSPLIB EUC_2D file")
    solve.add_argument("--mode", choices=("mtdp", "mgsp"), default="mtdp")
    solve.add_argument("--method", choices=METHODS, default="proposed")
    solve.add_argument("--vehicles", type=int, default=1, metavar="M")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--prob-file", help="one probability per line (mgsp)")
    solve.add_argument("--prob-seed", default=DEFAULT_PROB_SEED,
                       help="seed string for generated probabilities (mgsp)")
    solve.add_argument("--alpha", type=int, default=20)
    solve.add_argument("--beta", type=_parse_beta, default=(5, 5, 5, 5, 1),
                       metavar="B1,B2,...", help="candidate edges per chain depth")
    solve.add_argument("--nit", type=int, default=50)
    solve.add_argument("--rcl", type=int, default=10)
    solve.add_argument("--lk-trigger", type=float, default=1.10)
    solve.add_argument("--routes-out", help="write a route dump to this path")

    bench = sub.add_parser("bench", help="run a benchmark suite manifest")
    bench.add_argument("--suite", required=True, help="TOML or JSON manifest")
    bench.add_argument("--runs", type=int, default=None, help="override manifest run count")
    bench.add_argument("--out", required=True, help="CSV output path")
    bench.add_argument("--threads", type=int, default=None,
                       help=f"worker cap (default: MDSEARCH_THREADS or CPU count)")
    bench.add_argument("--omit-timing", action="store_true",
                       help="zero the mean_ms column for byte-stable output")
    return parser


def _cmd_solve(args) -> int:
    text = Path(args.instance).read_text(encoding="utf-8")
    kwargs: dict = {"m": args.vehicles, "mode": args.mode}
    if args.mode == "mgsp":
        if args.prob_file:
            skel = parse_tsplib(text)
            kwargs["prob"] = load_probabilities(
                Path(args.prob_file).read_text(encoding="utf-8"), skel.n
            )
        else:
            kwargs["prob_seed"] = args.prob_seed
    inst = Instance.from_tsplib(text, **kwargs)
    config = SolverConfig(
        alpha=args.alpha,
        beta_schedule=args.beta,
        n_it=args.nit,
        lk_trigger=args.lk_trigger,
        rcl_size=args.rcl,
        seed=args.seed,
    )
    t0 = time.perf_counter()
    sol = solve_once(inst, args.method, config)
    wall_ms = (time.perf_counter() - t0) * 1e3
    sol.validate(inst)
    print(f"instance {inst.name} n={inst.n} m={inst.m} mode={inst.mode} method={args.method}")
    print(f"cost {sol.cost:.6f}")
    print(f"time_ms {wall_ms:.3f}")
    if args.routes_out:
        Path(args.routes_out).write_text(dump_routes(sol, inst), encoding="utf-8")
        print(f"routes {args.routes_out}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    csv_text = run_suite(
        args.suite,
        runs=args.runs,
        threads=args.threads,
        include_timing=not args.omit_timing,
        log=sys.stderr,
    )
    Path(args.out).write_text(csv_text, encoding="utf-8")
    print(f"wrote {args.out} ({csv_text.count(chr(10)) - 1} rows, "
          f"{worker_count(args.threads)} workers)")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        return _cmd_bench(args)
    except (TsplibParseError, ProbabilityFileError, OSError, ValueError) as exc:
        if isinstance(exc, (SolutionError, CoverageError)):
            print(f"mdsearch: internal error: {exc}", file=sys.stderr)
            return EXIT_INTERNAL
        print(f"mdsearch: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AssertionError, RuntimeError) as exc:
        print(f"mdsearch: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
