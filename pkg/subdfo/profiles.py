import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .benchmark import RunRecord, best_known_values, convergence_eval_count
from .exceptions import ProfileError

logger = logging.getLogger(__name__)


@dataclass
class ProfileCurve:
    """
    Performance profile of one solver.

    Attributes
    ----------
    solver_id : str
        Solver configuration name.
    points : List[Tuple[float, float]]
        (log2 ratio, fraction of problems solved) at every breakpoint,
        sorted by ratio.
    """

    solver_id: str
    points: List[Tuple[float, float]] = field(default_factory=list)

    def fraction_at(self, log2_ratio: float) -> float:
        fraction = 0.0
        for ratio, value in self.points:
            if ratio > log2_ratio:
                break
            fraction = value
        return fraction


def _ordered_ids(records: Sequence[RunRecord]) -> Tuple[List[str], List[str]]:
    solvers: List[str] = []
    problems: List[str] = []
    for record in records:
        if record.solver_id not in solvers:
            solvers.append(record.solver_id)
        if record.problem_id not in problems:
            problems.append(record.problem_id)
    return solvers, problems


def convergence_table(
    records: Sequence[RunRecord],
    tol: float,
    f_lower: Optional[Mapping[str, float]] = None,
) -> Dict[Tuple[str, str], Optional[int]]:
    """
    Evaluations needed by every (solver, problem) pair to pass the
    convergence test, None for pairs that never pass.

    Raises
    ------
    ProfileError
        If the records are empty, or a pair is missing or duplicated.
    """
    solvers, problems = _ordered_ids(records)
    if not solvers or not problems:
        raise ProfileError("No records to profile")

    by_pair: Dict[Tuple[str, str], RunRecord] = {}
    for record in records:
        key = (record.solver_id, record.problem_id)
        if key in by_pair:
            raise ProfileError(f"Duplicate record for solver {key[0]} on {key[1]}")
        by_pair[key] = record
    missing = [(s, p) for s in solvers for p in problems if (s, p) not in by_pair]
    if missing:
        raise ProfileError(f"Missing records for {missing}")

    best = best_known_values(records, f_lower)
    return {
        key: convergence_eval_count(record, best[record.problem_id], tol)
        for key, record in by_pair.items()
    }


def performance_profile(
    records: Sequence[RunRecord],
    tol: float,
    f_lower: Optional[Mapping[str, float]] = None,
) -> List[ProfileCurve]:
    """
    Performance profiles over the number of function evaluations.

    For every problem the ratio of a solver is its evaluation count divided
    by the smallest count of any solver on that problem (infinite when it
    never converged). A curve gives, at each breakpoint t, the fraction of
    problems with log2(ratio) <= t.

    Parameters
    ----------
    records : Sequence[RunRecord]
        One record per (solver, problem) pair.
    tol : float
        Convergence test tolerance in (0, 1).
    f_lower : Mapping[str, float], optional
        Known lower values per problem, folded into the best known values.

    Returns
    -------
    List[ProfileCurve]
        One curve per solver, in order of first appearance. The breakpoints
        are the distinct finite log2 ratios ({0} when nothing converged).
    """
    solvers, problems = _ordered_ids(records)
    counts = convergence_table(records, tol, f_lower)
    if len(solvers) < 2:
        logger.warning("Performance profile computed for a single solver")

    log_ratios: Dict[Tuple[str, str], float] = {}
    for problem in problems:
        converged = [counts[(s, problem)] for s in solvers if counts[(s, problem)] is not None]
        smallest = min(converged) if converged else None
        for solver in solvers:
            count = counts[(solver, problem)]
            if count is None or smallest is None:
                log_ratios[(solver, problem)] = math.inf
            else:
                log_ratios[(solver, problem)] = math.log2(count / smallest)

    breakpoints = sorted({r for r in log_ratios.values() if math.isfinite(r)})
    if not breakpoints:
        breakpoints = [0.0]

    curves = []
    for solver in solvers:
        ratios = [log_ratios[(solver, problem)] for problem in problems]
        points = [
            (t, sum(1 for r in ratios if r <= t) / len(problems)) for t in breakpoints
        ]
        curves.append(ProfileCurve(solver_id=solver, points=points))
    return curves
