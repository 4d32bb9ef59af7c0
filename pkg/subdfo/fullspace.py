"""
Full-space baseline: the inner method run directly on R^n.

Used by benchmarks to compare the subspace iteration against a solver that
never restricts its search.
"""

import logging
import math
from typing import Optional

import numpy as np

from .constants import InnerMethod, RunStatus
from .driver import RunResult, SolverOptions
from .oracle import EvaluationOracle
from .problem import ProblemSpec
from .reporter import Reporter
from .subsolver import nelder_mead, quadratic_model_search

logger = logging.getLogger(__name__)


def minimize_full_space(
    problem: ProblemSpec,
    options: SolverOptions,
    reporter: Optional[Reporter] = None,
) -> RunResult:
    """
    Minimize with the configured inner method in all n coordinates.

    Each round restarts the method from the best point so far with initial
    scale ``inner.initial_scale * radius``. The radius starts at ``delta0``
    and halves after every round that fails to improve. The run stops once
    the radius drops below ``delta_min`` or the budget is spent.

    Parameters
    ----------
    problem : ProblemSpec
        The problem to solve.
    options : SolverOptions
        Uses ``delta0``, ``delta_min``, ``max_evals``, ``truncation_digits``,
        ``inner.method``, ``inner.initial_scale`` and ``seed``.
    reporter : Reporter, optional
        Receives the run summary.

    Returns
    -------
    RunResult
        Best point ever evaluated, status and trace. ``iterations`` is empty.
    """
    reporter = reporter if reporter is not None else Reporter()
    n = problem.n
    oracle = EvaluationOracle(
        problem,
        truncation_digits=options.truncation_digits,
        max_evals=options.resolve_max_evals(n),
    )
    rng = np.random.default_rng(options.seed)
    reporter.info(f"Minimizing {problem.name} (n={n}) in full space")

    x = np.array(problem.x0, dtype=float)
    f0 = oracle.evaluate(x)
    f = f0
    radius = options.delta0
    status = RunStatus.RUNNING
    if not math.isfinite(f0):
        reporter.warning(f"f(x0) is not finite for {problem.name}")
        status = RunStatus.STALLED

    while status is RunStatus.RUNNING:
        budget = oracle.remaining()
        if budget < n + 1:
            status = RunStatus.BUDGET_EXHAUSTED
            break

        def shifted(alpha: np.ndarray, center: np.ndarray = x) -> float:
            return oracle.evaluate(center + alpha)

        scale = options.inner.initial_scale * radius
        if options.inner.method is InnerMethod.NELDER_MEAD:
            alpha, f_round, _ = nelder_mead(shifted, n, scale, budget, f0=f)
        else:
            alpha, f_round, _ = quadratic_model_search(
                shifted, n, scale, budget, f0=f, rng=rng
            )

        if f_round < f:
            x, f = x + alpha, f_round
        else:
            radius /= 2
        logger.debug(f"Full-space round ended at f={f!r}, radius={radius!r}")
        if radius < options.delta_min:
            status = RunStatus.DELTA_CONVERGED

    result = RunResult(
        x=oracle.best_x if oracle.best_x is not None else x,
        f=oracle.best_f,
        status=status,
        trace=list(oracle.best_trace),
        iterations=[],
        nf=oracle.eval_count,
        f0=f0,
        failures=list(oracle.failures),
    )
    reporter.report_run(result)
    return result
