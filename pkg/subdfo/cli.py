"""
Command line interface.

    python -m subdfo run --problem arwhead --n 100 --truncate-digits 3
    python -m subdfo bench --manifest bench.yml --tol 1e-1,1e-3 --out results/
    python -m subdfo problems
"""

import argparse
import logging
import os
import sys
from typing import List, Optional, Sequence

from .benchmark import problem_lower_values, run_matrix
from .constants import (
    DEFAULT_TOLERANCES,
    OUTPUT_DIR_DEFAULT,
    OUTPUT_DIR_ENV,
    Algorithm,
    InnerMethod,
    SubspaceKind,
)
from .driver import SolverOptions, minimize
from .exceptions import SubdfoError
from .manifest import load_manifest
from .outputs import emit_outputs
from .problem import describe_problem, list_problems, make_problem
from .profiles import performance_profile
from .reporter import Reporter


def _default_out_dir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV, OUTPUT_DIR_DEFAULT)


def _tolerance_list(text: str) -> List[float]:
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid tolerance list '{text}'")
    if not values or any(not 0 < tol < 1 for tol in values):
        raise argparse.ArgumentTypeError(f"tolerances must lie in (0, 1), got '{text}'")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subdfo",
        description="Iterated-subspace derivative-free optimization and benchmarks.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Log every iteration.")
    verbosity.add_argument("--quiet", action="store_true", help="Only log warnings.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Minimize one catalog problem.")
    run.add_argument("--problem", required=True, help="Catalog problem name.")
    run.add_argument("--n", type=int, required=True, help="Dimension.")
    run.add_argument(
        "--algorithm",
        choices=[algorithm.value for algorithm in Algorithm],
        default=Algorithm.SUBSPACE.value,
        help="Subspace iteration, or the inner method on all coordinates.",
    )
    run.add_argument(
        "--subspace",
        choices=[kind.value for kind in SubspaceKind],
        default=SubspaceKind.LMQN.value,
    )
    run.add_argument("--eta", type=float)
    run.add_argument("--delta0", type=float)
    run.add_argument("--tau", type=float, help="Stencil scale (default n^-1/2).")
    run.add_argument("--memory", type=int, help="Number of (s, y) pairs kept.")
    run.add_argument(
        "--inner",
        choices=[method.value for method in InnerMethod],
        default=InnerMethod.NELDER_MEAD.value,
    )
    run.add_argument("--inner-budget", type=int)
    run.add_argument("--truncate-digits", type=int)
    run.add_argument("--max-evals", type=int)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--workers", type=int, default=1, help="Stencil threads.")
    run.add_argument("--out", default=None, help="Directory for runs.csv and traces.csv.")

    bench = subparsers.add_parser("bench", help="Run a manifest and emit profiles.")
    bench.add_argument("--manifest", required=True, help="YAML manifest file.")
    bench.add_argument(
        "--tol",
        type=_tolerance_list,
        default=None,
        help="Comma separated tolerances (default: manifest, else 1e-1,1e-3).",
    )
    bench.add_argument("--out", default=None, help="Output directory.")
    bench.add_argument("--workers", type=int, default=1, help="Parallel runs.")

    problems = subparsers.add_parser("problems", help="List the problem catalog.")
    problems.add_argument("--describe", action="store_true", help="Include descriptions.")
    return parser


def _run_options(args: argparse.Namespace) -> SolverOptions:
    inner = {"method": args.inner}
    if args.inner_budget is not None:
        inner["budget"] = args.inner_budget
    values = {
        "algorithm": args.algorithm,
        "subspace_kind": args.subspace,
        "inner": inner,
        "eta": args.eta,
        "delta0": args.delta0,
        "tau": args.tau,
        "memory_m": args.memory,
        "truncation_digits": args.truncate_digits,
        "max_evals": args.max_evals,
        "seed": args.seed,
        "workers": args.workers,
    }
    return SolverOptions.from_mapping({k: v for k, v in values.items() if v is not None})


def _command_run(args: argparse.Namespace, reporter: Reporter) -> int:
    problem = make_problem(args.problem, args.n)
    options = _run_options(args)
    result = minimize(problem, options, reporter=reporter)
    if options.algorithm is Algorithm.FULL_SPACE:
        solver_id = f"{Algorithm.FULL_SPACE.value}/{options.inner.method.value}"
    else:
        solver_id = f"{options.subspace_kind.value}/{options.inner.method.value}"
    record = result.to_record(solver_id, problem.name)

    print(f"problem: {problem.name} (n={problem.n})")
    print(f"f0: {result.f0:.6e}")
    print(f"f_fin: {result.f:.6e}")
    print(f"NF: {result.nf}")
    print(f"status: {result.status.value}")

    out_dir = args.out or _default_out_dir()
    emit_outputs([record], {}, out_dir)
    return 0 if not result.violations else 1


def _command_bench(args: argparse.Namespace, reporter: Reporter) -> int:
    manifest = load_manifest(args.manifest)
    tolerances = args.tol or manifest.tolerances or list(DEFAULT_TOLERANCES)
    records = run_matrix(manifest, workers=args.workers)
    lower = problem_lower_values(records)
    curves = {tol: performance_profile(records, tol, lower) for tol in tolerances}

    out_dir = args.out or _default_out_dir()
    for path in emit_outputs(records, curves, out_dir):
        print(path)
    reporter.info(f"Benchmark of {len(records)} runs written to {out_dir}")
    return 0


def _command_problems(args: argparse.Namespace) -> int:
    for name in list_problems():
        if args.describe:
            print(f"{name}: {describe_problem(name).get('description', '')}")
        else:
            print(name)
    return 0


def cli(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of ``python -m subdfo``.

    Returns
    -------
    int
        0 on success, 2 on usage or configuration errors, 1 when a run
        reported invariant violations.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0

    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    reporter = Reporter(level=level)

    try:
        if args.command == "run":
            return _command_run(args, reporter)
        if args.command == "bench":
            return _command_bench(args, reporter)
        return _command_problems(args)
    except SubdfoError as e:
        print(f"subdfo: error: {e}", file=sys.stderr)
        return 2
