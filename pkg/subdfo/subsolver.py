"""
Approximate solution of the subspace subproblem

    min { f(x_k + B alpha) : alpha in R^p }

followed by the safeguard acceptance that certifies

    f_{k+1} <= max{ f_k - eta delta_k^2, f(x_k - delta_k gg_k / ||gg_k||) }.

The inner solvers work in reduced coordinates alpha and never see x directly.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .constants import (
    INITIAL_SCALE_DEFAULT,
    INNER_BUDGET_FACTOR,
    NM_CONTRACTION,
    NM_EXPANSION,
    NM_REFLECTION,
    NM_SHRINK,
    NM_XTOL,
    QM_ETA_ACCEPT,
    QM_MIN_RADIUS,
    AcceptedVia,
    InnerMethod,
)
from .exceptions import BudgetExhaustedError, SubspaceError
from .oracle import EvaluationOracle
from .subspace import SubspaceBasis

logger = logging.getLogger(__name__)


class InnerSolverSpec(BaseModel):
    """
    Configuration of the low-dimensional inner solver.
    """

    model_config = ConfigDict(frozen=True)

    method: InnerMethod = Field(
        default=InnerMethod.NELDER_MEAD,
        description="Reduced-space minimizer used on the subproblem.",
    )
    budget: Optional[int] = Field(
        default=None,
        ge=1,
        description="Maximum inner evaluations; defaults to 10 * (p + 1), never below p + 2.",
    )
    initial_scale: float = Field(
        default=INITIAL_SCALE_DEFAULT,
        gt=0,
        description="Initial simplex / model radius as a multiple of delta_k.",
    )

    def resolve_budget(self, p: int) -> int:
        if self.budget is None:
            return INNER_BUDGET_FACTOR * (p + 1)
        return max(self.budget, p + 2)


@dataclass
class StepOutcome:
    """
    Result of the acceptance decision of one iteration.

    Attributes
    ----------
    x_next : np.ndarray
        Accepted point.
    f_next : float
        Its value.
    accepted_via : AcceptedVia
        Whether the subspace point, the safeguard point or the current
        iterate was accepted.
    decrease_flag : bool
        Whether f_k - f_next >= eta * delta^2.
    evals_used : int
        Inner-solver evaluations plus the safeguard evaluation, if any.
    f_safeguard : float, optional
        Value at the safeguard point (f_k when gg = 0); None when the
        safeguard was not needed.
    safeguard_evaluated : bool
        Whether the safeguard point cost an evaluation.
    """

    x_next: np.ndarray
    f_next: float
    accepted_via: AcceptedVia
    decrease_flag: bool
    evals_used: int
    f_safeguard: Optional[float] = None
    safeguard_evaluated: bool = False


def sufficient_decrease_threshold(f: float, eta: float, delta: float) -> float:
    return f - eta * delta * delta


def sufficient_decrease(f: float, f_next: float, eta: float, delta: float) -> bool:
    """
    Whether f - f_next >= eta * delta^2.

    Compared as a difference so that a point equal to f never qualifies once
    eta * delta^2 drops below the spacing of floats around f.
    """
    return f - f_next >= eta * delta * delta


class _BudgetSpent(Exception):
    pass


class _CountingFunction:
    """
    Budgeted wrapper that remembers the best reduced point seen.
    """

    def __init__(self, func: Callable[[np.ndarray], float], budget: int):
        self.func = func
        self.budget = budget
        self.count = 0
        self.best_alpha: Optional[np.ndarray] = None
        self.best_f = math.inf

    def offer(self, alpha: np.ndarray, value: float) -> None:
        if self.best_alpha is None or value < self.best_f:
            self.best_alpha = np.array(alpha, dtype=float)
            self.best_f = value

    def __call__(self, alpha: np.ndarray) -> float:
        if self.count >= self.budget:
            raise _BudgetSpent()
        value = self.func(alpha)
        self.count += 1
        self.offer(alpha, value)
        return value


def nelder_mead(
    func: Callable[[np.ndarray], float],
    dim: int,
    scale: float,
    budget: int,
    f0: Optional[float] = None,
    xtol: float = NM_XTOL,
) -> Tuple[np.ndarray, float, int]:
    """
    Nelder-Mead from the origin of R^dim with a fixed evaluation budget.

    The initial simplex is the origin plus ``-scale * e_j`` for each reduced
    coordinate. Coefficients: reflection 1, expansion 2, contraction 1/2,
    shrink 1/2.

    Parameters
    ----------
    func : Callable[[np.ndarray], float]
        Reduced objective.
    dim : int
        Reduced dimension p.
    scale : float
        Initial simplex edge length.
    budget : int
        Maximum number of calls to func.
    f0 : float, optional
        Known value at the origin (not re-evaluated).
    xtol : float
        Stop once every vertex is within ``xtol * scale`` of the best one.

    Returns
    -------
    Tuple[np.ndarray, float, int]
        Best reduced point, its value and the number of calls made. Ties
        keep the earliest point, so the origin wins unless strictly beaten.
    """
    counter = _CountingFunction(func, budget)
    origin = np.zeros(dim)
    try:
        if f0 is None:
            f0 = counter(origin)
        else:
            counter.offer(origin, f0)
        simplex = [(origin, f0)]
        for j in range(dim):
            vertex = origin.copy()
            vertex[j] -= scale
            simplex.append((vertex, counter(vertex)))

        while True:
            simplex.sort(key=lambda item: item[1])
            best = simplex[0][0]
            size = max(np.linalg.norm(v - best) for v, _ in simplex[1:])
            if size <= xtol * scale:
                break

            worst, f_worst = simplex[-1]
            centroid = np.mean([v for v, _ in simplex[:-1]], axis=0)

            # Reflection
            xr = centroid + NM_REFLECTION * (centroid - worst)
            fr = counter(xr)
            if simplex[0][1] <= fr < simplex[-2][1]:
                simplex[-1] = (xr, fr)
                continue

            # Expansion
            if fr < simplex[0][1]:
                xe = centroid + NM_EXPANSION * (xr - centroid)
                fe = counter(xe)
                simplex[-1] = (xe, fe) if fe < fr else (xr, fr)
                continue

            # Contraction
            if fr < f_worst:
                xc = centroid + NM_CONTRACTION * (xr - centroid)
                fc = counter(xc)
                if fc <= fr:
                    simplex[-1] = (xc, fc)
                    continue
            else:
                xc = centroid + NM_CONTRACTION * (worst - centroid)
                fc = counter(xc)
                if fc < f_worst:
                    simplex[-1] = (xc, fc)
                    continue

            # Shrink
            anchor = simplex[0][0]
            shrunk = [simplex[0]]
            for vertex, _ in simplex[1:]:
                moved = anchor + NM_SHRINK * (vertex - anchor)
                shrunk.append((moved, counter(moved)))
            simplex = shrunk
    except _BudgetSpent:
        pass
    return counter.best_alpha, counter.best_f, counter.count


def quadratic_model_search(
    func: Callable[[np.ndarray], float],
    dim: int,
    scale: float,
    budget: int,
    f0: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[np.ndarray, float, int]:
    """
    Experimental trust-region search on separable quadratic interpolants.

    Each round samples the 2p + 1 points center +/- h d_j along orthonormal
    directions d_j, fits the quadratic with a diagonal Hessian in that frame,
    takes the model minimizer inside the ball of radius h and updates h by
    the usual ratio test. When the model offers no step the frame is
    replaced by a random rotation drawn from ``rng``.

    Returns
    -------
    Tuple[np.ndarray, float, int]
        Best reduced point, its value and the number of calls made.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    counter = _CountingFunction(func, budget)
    center = np.zeros(dim)
    frame = np.eye(dim)
    radius = scale
    try:
        if f0 is None:
            f0 = counter(center)
        else:
            counter.offer(center, f0)
        f_center = f0

        while radius > QM_MIN_RADIUS * scale:
            f_plus = np.array([counter(center + radius * d) for d in frame.T])
            f_minus = np.array([counter(center - radius * d) for d in frame.T])
            grad = (f_plus - f_minus) / (2.0 * radius)
            curv = (f_plus - 2.0 * f_center + f_minus) / radius**2
            if not (np.all(np.isfinite(grad)) and np.all(np.isfinite(curv))):
                center, f_center = counter.best_alpha, counter.best_f
                radius *= 0.5
                continue

            t = np.where(
                curv > 0,
                -grad / np.where(curv > 0, curv, 1.0),
                -np.sign(grad) * radius,
            )
            length = np.linalg.norm(t)
            if length > radius:
                t *= radius / length
            predicted = -(np.dot(grad, t) + 0.5 * np.dot(curv, t**2))

            if length == 0 or predicted <= 0:
                q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
                frame = q
                center, f_center = counter.best_alpha, counter.best_f
                radius *= 0.5
                continue

            f_trial = counter(center + frame @ t)
            ratio = (f_center - f_trial) / predicted
            if ratio >= 0.75:
                radius *= 2.0
            elif ratio < QM_ETA_ACCEPT:
                radius *= 0.5
            center, f_center = counter.best_alpha, counter.best_f
    except _BudgetSpent:
        pass
    return counter.best_alpha, counter.best_f, counter.count


def solve_subspace(
    oracle: EvaluationOracle,
    x_center: np.ndarray,
    basis: SubspaceBasis,
    spec: InnerSolverSpec,
    delta: float,
    f_center: Optional[float] = None,
    budget: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[np.ndarray, float, int]:
    """
    Approximately minimize f over the affine subspace x_center + span(basis).

    Parameters
    ----------
    oracle : EvaluationOracle
        Evaluation channel.
    x_center : np.ndarray
        Current iterate x_k.
    basis : SubspaceBasis
        Orthonormal basis of S_k, nonempty.
    spec : InnerSolverSpec
        Inner method, budget and initial scale.
    delta : float
        Radius parameter; the initial scale is ``spec.initial_scale * delta``.
    f_center : float, optional
        Known f(x_center); evaluated (and counted) when omitted.
    budget : int, optional
        Overrides ``spec.resolve_budget(p)``, e.g. to respect the global budget.
    rng : np.random.Generator, optional
        Source for randomized choices of the inner solver.

    Returns
    -------
    Tuple[np.ndarray, float, int]
        x_s = x_center + B alpha_best, its value and the evaluations spent.
        Running out of budget is not an error: the best point so far is returned.
    """
    if basis.dim == 0:
        raise SubspaceError("Cannot solve a subproblem on an empty basis")
    limit = spec.resolve_budget(basis.dim) if budget is None else budget
    if f_center is None and limit < 1:
        raise ValueError("A budget of at least one evaluation is needed without f_center")

    def reduced(alpha: np.ndarray) -> float:
        try:
            return oracle.evaluate(x_center + basis.lift(alpha))
        except BudgetExhaustedError:
            raise _BudgetSpent()

    scale = spec.initial_scale * delta
    if spec.method is InnerMethod.NELDER_MEAD:
        alpha, f_s, evals = nelder_mead(reduced, basis.dim, scale, limit, f0=f_center)
    else:
        alpha, f_s, evals = quadratic_model_search(
            reduced, basis.dim, scale, limit, f0=f_center, rng=rng
        )

    if not np.any(alpha):
        return np.array(x_center, dtype=float), f_s, evals
    return x_center + basis.lift(alpha), f_s, evals


def safeguard_accept(
    oracle: EvaluationOracle,
    x_k: np.ndarray,
    f_k: float,
    gg: np.ndarray,
    x_s: np.ndarray,
    f_s: float,
    eta: float,
    delta: float,
    inner_evals: int = 0,
) -> StepOutcome:
    """
    Accept the subspace point or fall back to the safeguard point.

    If f_k - f_s >= eta * delta^2 the subspace point is accepted without
    further evaluations. Otherwise x_g = x_k - delta * gg / ||gg|| is
    evaluated (x_g = x_k when gg = 0) and the point with the smallest value
    among x_g, x_s, x_k is accepted, ties resolved in that order.

    Parameters
    ----------
    inner_evals : int
        Evaluations already spent by the inner solver, added to evals_used.

    Returns
    -------
    StepOutcome
    """
    if sufficient_decrease(f_k, f_s, eta, delta):
        return StepOutcome(
            x_next=x_s,
            f_next=f_s,
            accepted_via=AcceptedVia.SUBSPACE,
            decrease_flag=True,
            evals_used=inner_evals,
        )

    candidates = []
    gg_norm = float(np.linalg.norm(gg))
    safeguard_evaluated = False
    if gg_norm > 0:
        x_g = x_k - delta * gg / gg_norm
        try:
            f_g = oracle.evaluate(x_g)
            safeguard_evaluated = True
        except BudgetExhaustedError:
            logger.warning("No budget left for the safeguard point")
            f_g = math.inf
        candidates.append((x_g, f_g, AcceptedVia.SAFEGUARD))
    else:
        f_g = f_k
    candidates.append((x_s, f_s, AcceptedVia.SUBSPACE))
    candidates.append((x_k, f_k, AcceptedVia.STAY))

    x_next, f_next, via = candidates[0]
    for point, value, source in candidates[1:]:
        if value < f_next:
            x_next, f_next, via = point, value, source
    if via is AcceptedVia.SUBSPACE and np.array_equal(x_s, x_k):
        via = AcceptedVia.STAY

    return StepOutcome(
        x_next=x_next,
        f_next=f_next,
        accepted_via=via,
        decrease_flag=sufficient_decrease(f_k, f_next, eta, delta),
        evals_used=inner_evals + int(safeguard_evaluated),
        f_safeguard=f_g,
        safeguard_evaluated=safeguard_evaluated,
    )
