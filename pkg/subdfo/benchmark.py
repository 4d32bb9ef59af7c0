"""
Benchmark records and the convergence test used by the profiles.

A run solves a problem at tolerance tol once its best value satisfies

    f <= f_best + tol * (f0 - f_best)

where f_best is the best value known for the problem across all runs.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Iterable, List, Mapping, Optional, Tuple

from .driver import SolverOptions, minimize
from .problem import make_problem
from .reporter import Reporter

if TYPE_CHECKING:
    from .manifest import Manifest

logger = logging.getLogger(__name__)


@dataclass
class RunRecord:
    """
    Evaluation history of one (solver, problem) run.

    Attributes
    ----------
    solver_id : str
        Solver configuration name.
    problem_id : str
        Problem name.
    n : int
        Dimension.
    f0 : float
        Value at the starting point.
    trace : List[Tuple[int, float]]
        (eval index, best value so far), non-increasing in the value.
    status : str
        Final run status.
    """

    solver_id: str
    problem_id: str
    n: int
    f0: float
    trace: List[Tuple[int, float]] = field(default_factory=list)
    status: str = ""

    @property
    def nf(self) -> Optional[int]:
        return self.trace[-1][0] if self.trace else None

    @property
    def f_fin(self) -> Optional[float]:
        return self.trace[-1][1] if self.trace else None

    @property
    def best_value(self) -> float:
        values = [value for _, value in self.trace]
        return min([self.f0] + values)


def convergence_eval_count(
    record: RunRecord, f_best_overall: float, tol: float
) -> Optional[int]:
    """
    Number of evaluations the run needed to pass the convergence test.

    Parameters
    ----------
    record : RunRecord
        The run.
    f_best_overall : float
        Best known value of the problem, at most every value in the trace.
    tol : float
        Tolerance in (0, 1).

    Returns
    -------
    int or None
        Smallest eval index whose best value is within tolerance, 1 when
        f0 already equals the best value, None if never reached.
    """
    if not 0 < tol < 1:
        raise ValueError(f"Tolerance must lie in (0, 1), got {tol}")
    if record.f0 == f_best_overall:
        return 1
    threshold = f_best_overall + tol * (record.f0 - f_best_overall)
    for index, value in record.trace:
        if value <= threshold:
            return index
    return None


def best_known_values(
    records: Iterable[RunRecord], f_lower: Optional[Mapping[str, float]] = None
) -> Dict[str, float]:
    """
    Best value per problem over all runs, lowered to the known lower value
    of the problem when one is given.
    """
    best: Dict[str, float] = {}
    for record in records:
        value = record.best_value
        best[record.problem_id] = min(best.get(record.problem_id, math.inf), value)
    for problem_id, lower in (f_lower or {}).items():
        if problem_id in best and lower is not None:
            best[problem_id] = min(best[problem_id], lower)
    return best


def run_cell(
    solver_id: str, options: SolverOptions, problem_name: str, n: int
) -> RunRecord:
    """
    Run one solver configuration on one catalog problem.
    """
    problem = make_problem(problem_name, n)
    reporter = Reporter(name="subdfo.bench", level=logging.WARNING)
    result = minimize(problem, options, reporter=reporter)
    if result.violations:
        logger.warning(
            f"{solver_id} on {problem_name}: {len(result.violations)} invariant violations"
        )
    return result.to_record(solver_id, problem_name)


def _run_cell_args(args: Tuple[str, SolverOptions, str, int]) -> RunRecord:
    return run_cell(*args)


def run_matrix(manifest: "Manifest", workers: int = 1) -> List[RunRecord]:
    """
    Run every solver of the manifest on every problem.

    Parameters
    ----------
    manifest : Manifest
        Problems and solver configurations.
    workers : int
        Number of processes; each cell owns its oracle.

    Returns
    -------
    List[RunRecord]
        One record per (solver, problem), problems outer, solvers inner.
    """
    cells = [
        (solver.id, manifest.solver_options(solver), problem.name, problem.n)
        for problem in manifest.problems
        for solver in manifest.solvers
    ]
    logger.info(f"Running {len(cells)} benchmark cells on {workers} worker(s)")
    if workers <= 1:
        return [_run_cell_args(cell) for cell in cells]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(_run_cell_args, cells))


def problem_lower_values(records: Iterable[RunRecord]) -> Dict[str, float]:
    """
    Catalog lower values (f_lower) of the problems appearing in the records.
    """
    lower = {}
    for record in records:
        if record.problem_id in lower:
            continue
        value = make_problem(record.problem_id, record.n).f_lower
        if value is not None:
            lower[record.problem_id] = value
    return lower
