"""
Main loop of the iterated-subspace derivative-free method.

Each iteration estimates a gradient gg_k by forward differences with step
tau * delta_k, searches the affine subspace x_k + S_k (S_k contains gg_k),
falls back to the safeguard point x_k - delta_k gg_k / ||gg_k|| when the
subspace search does not reach sufficient decrease, and then doubles delta_k
if ||gg_k|| >= eta delta_k and sufficient decrease was achieved, halving it
otherwise.
"""

import logging
import math
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .constants import (
    DELTA0_DEFAULT,
    DELTA_MIN_DEFAULT,
    DROP_TOL,
    ETA_DEFAULT,
    MAX_EVALS_FACTOR,
    MEMORY_DEFAULT,
    AcceptedVia,
    Algorithm,
    RunStatus,
    SubspaceKind,
)
from .exceptions import BudgetExhaustedError, GradientEstimationError, OptionsError
from .gradient import default_tau, estimate_gradient, stencil_points, stencil_step
from .observers import Observer, default_observers
from .oracle import EvaluationOracle
from .problem import ProblemSpec
from .reporter import Reporter
from .subsolver import InnerSolverSpec, safeguard_accept, solve_subspace
from .subspace import HistoryPairs, build_subspace

logger = logging.getLogger(__name__)


class SolverOptions(BaseModel):
    """
    Options of one solver configuration.

    ``tau=None`` and ``max_evals=None`` resolve to n^(-1/2) and 500 (n + 1)
    once the dimension is known.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    eta: float = Field(
        default=ETA_DEFAULT, gt=0, description="Sufficient decrease constant."
    )
    delta0: float = Field(
        default=DELTA0_DEFAULT, gt=0, description="Initial radius parameter."
    )
    tau: Optional[float] = Field(
        default=None, gt=0, description="Stencil scale; None selects n^(-1/2)."
    )
    algorithm: Algorithm = Field(
        default=Algorithm.SUBSPACE,
        description="Iterated-subspace method, or the inner method on all of R^n.",
    )
    subspace_kind: SubspaceKind = Field(
        default=SubspaceKind.LMQN, description="Recipe for the search subspace."
    )
    memory_m: int = Field(
        default=MEMORY_DEFAULT, ge=1, description="Number of (s, y) pairs kept."
    )
    inner: InnerSolverSpec = Field(
        default_factory=InnerSolverSpec, description="Subproblem solver settings."
    )
    delta_min: float = Field(
        default=DELTA_MIN_DEFAULT, gt=0, description="Stop once delta drops below."
    )
    max_evals: Optional[int] = Field(
        default=None, ge=1, description="Evaluation budget; None selects 500 (n + 1)."
    )
    truncation_digits: Optional[int] = Field(
        default=None, ge=1, description="Significant digits kept by the oracle."
    )
    drop_tol: float = Field(
        default=DROP_TOL, gt=0, lt=1, description="Relative drop tolerance of Gram-Schmidt."
    )
    workers: int = Field(
        default=1, ge=1, description="Threads used for the stencil evaluations."
    )
    record_iterates: bool = Field(
        default=False, description="Keep a copy of x_k in every iteration record."
    )
    check_invariants: bool = Field(
        default=True, description="Run the default observers after every iteration."
    )
    seed: int = Field(default=0, description="Seed of the inner solver's generator.")

    @model_validator(mode="after")
    def _check_delta_range(self) -> "SolverOptions":
        if self.delta_min >= self.delta0:
            raise ValueError(
                f"delta_min ({self.delta_min}) must be smaller than delta0 ({self.delta0})"
            )
        return self

    @classmethod
    def from_mapping(cls, values: dict) -> "SolverOptions":
        """
        Validate options from a plain mapping, raising OptionsError on failure.
        """
        try:
            return cls.model_validate(values)
        except ValidationError as e:
            raise OptionsError(str(e)) from e

    def resolve_tau(self, n: int) -> float:
        return default_tau(n) if self.tau is None else self.tau

    def resolve_max_evals(self, n: int) -> int:
        if self.max_evals is None:
            return MAX_EVALS_FACTOR * (n + 1)
        return self.max_evals


@dataclass
class IterationRecord:
    """
    Everything logged about one iteration.

    A skipped iteration (non-finite stencil value) carries only k, f, delta,
    delta_next and the evaluation counts; its acceptance fields describe
    staying at x_k.
    ``membership_residual`` and ``orthonormality_error`` describe the basis of
    S_k and are None when no subspace was built.
    """

    k: int
    f: float
    delta: float
    gg_norm: float
    subspace_kind: Optional[SubspaceKind]
    subspace_dim: int
    f_safeguard: Optional[float]
    f_next: float
    accepted_via: AcceptedVia
    decrease_flag: bool
    delta_next: float
    center_evals: int
    stencil_evals: int
    inner_evals: int
    safeguard_evals: int
    eval_count: int
    skipped: bool = False
    membership_residual: Optional[float] = None
    orthonormality_error: Optional[float] = None
    x: Optional[np.ndarray] = None


@dataclass
class SolverState:
    """
    State carried between iterations.

    ``x_prev`` and ``gg`` hold the iterate and gradient estimate of the
    previous iteration; they produce the next (s, y) pair.
    """

    k: int
    x: np.ndarray
    f: Optional[float]
    delta: float
    history: HistoryPairs
    gg: Optional[np.ndarray] = None
    x_prev: Optional[np.ndarray] = None
    status: RunStatus = RunStatus.RUNNING
    last_record: Optional[IterationRecord] = None


@dataclass(frozen=True)
class TheoryProbe:
    """
    Constants of the small-radius regime of the method.

    When delta_k <= mu ||g(x_k)|| the iteration must satisfy ||gg_k|| >= eta
    delta_k and achieve sufficient decrease.

    Attributes
    ----------
    L : float
        Lipschitz constant of the gradient.
    zeta : float
        Gradient estimation constant tau sqrt(n) L / 2.
    eta : float
        Sufficient decrease constant.
    mu : float
        2 / (L + 2 eta + 4 zeta).
    """

    L: float
    zeta: float
    eta: float
    mu: float

    @classmethod
    def from_problem(cls, L: float, n: int, tau: float, eta: float) -> "TheoryProbe":
        if L <= 0 or n < 1 or tau <= 0 or eta <= 0:
            raise ValueError("L, n, tau and eta must be positive")
        zeta = tau * math.sqrt(n) * L / 2
        return cls(L=L, zeta=zeta, eta=eta, mu=2 / (L + 2 * eta + 4 * zeta))

    def small_radius(self, delta: float, grad_norm: float) -> bool:
        return delta <= self.mu * grad_norm


@dataclass
class RunResult:
    """
    Outcome of ``minimize``.

    Attributes
    ----------
    x : np.ndarray
        Best point ever evaluated.
    f : float
        Its value.
    status : RunStatus
        Why the run stopped.
    trace : List[Tuple[int, float]]
        (eval index, best value so far) for every evaluation.
    iterations : List[IterationRecord]
        One record per iteration.
    nf : int
        Number of evaluations.
    f0 : float
        f(x0).
    failures : List[int]
        Eval indices that returned a non-finite value.
    violations : List[str]
        Invariant violations reported by the observers.
    """

    x: np.ndarray
    f: float
    status: RunStatus
    trace: List[Tuple[int, float]]
    iterations: List[IterationRecord]
    nf: int
    f0: float
    failures: List[int] = field(default_factory=list)
    violations: List[str] = field(default_factory=list)

    def to_record(self, solver_id: str, problem_id: str):
        from .benchmark import RunRecord

        return RunRecord(
            solver_id=solver_id,
            problem_id=problem_id,
            n=int(self.x.size),
            f0=self.f0,
            trace=list(self.trace),
            status=self.status.value,
        )


def update_delta(
    delta: float, gg_norm: float, decrease_flag: bool, eta: float
) -> float:
    """
    Double delta when ||gg|| >= eta delta and sufficient decrease was
    achieved, halve it otherwise.
    """
    if gg_norm >= eta * delta and decrease_flag:
        return 2 * delta
    return delta / 2


def _budget_short(oracle: EvaluationOracle, n: int) -> bool:
    remaining = oracle.remaining()
    return remaining is not None and remaining < n


def _stencil_values(
    oracle: EvaluationOracle,
    x: np.ndarray,
    f: float,
    step_size: float,
    executor: Optional[Executor],
) -> List[float]:
    points = stencil_points(x, step_size)
    next(points)
    if executor is None:
        values = [oracle.evaluate(point) for point in points]
    else:
        values = list(executor.map(oracle.evaluate, points))
    return [f] + values


def step(
    state: SolverState,
    oracle: EvaluationOracle,
    options: SolverOptions,
    rng: Optional[np.random.Generator] = None,
    executor: Optional[Executor] = None,
) -> SolverState:
    """
    Run exactly one iteration and update ``state`` in place.

    Parameters
    ----------
    state : SolverState
        Current state, status must be running.
    oracle : EvaluationOracle
        Evaluation channel; its cap is the global budget.
    options : SolverOptions
        Solver configuration.
    rng : np.random.Generator, optional
        Generator handed to the inner solver.
    executor : Executor, optional
        When given, the n stencil evaluations are mapped through it.

    Returns
    -------
    SolverState
        The same object, with ``last_record`` describing the iteration (None
        when the budget did not allow an iteration to start).
    """
    if state.status is not RunStatus.RUNNING:
        raise ValueError(f"Cannot step a run with status {state.status.value}")

    n = state.x.size
    x = state.x
    delta = state.delta
    eta = options.eta
    state.last_record = None

    center_evals = 0
    if state.f is None:
        try:
            state.f = oracle.evaluate(x)
        except BudgetExhaustedError:
            state.status = RunStatus.BUDGET_EXHAUSTED
            return state
        center_evals = 1
    f = state.f
    if not math.isfinite(f):
        logger.warning("Objective is not finite at the current iterate")
        state.status = RunStatus.STALLED
        return state

    if _budget_short(oracle, n):
        state.status = RunStatus.BUDGET_EXHAUSTED
        return state

    # Step 1: gradient estimate
    step_size = stencil_step(x, delta, options.resolve_tau(n))
    values = _stencil_values(oracle, x, f, step_size, executor)
    try:
        estimate = estimate_gradient(values, step_size, stencil_evals=n)
    except GradientEstimationError as e:
        delta_next = delta / 2
        logger.debug(f"k={state.k}: {e}; delta halved")
        state.last_record = IterationRecord(
            k=state.k,
            f=f,
            delta=delta,
            gg_norm=0.0,
            subspace_kind=None,
            subspace_dim=0,
            f_safeguard=None,
            f_next=f,
            accepted_via=AcceptedVia.STAY,
            decrease_flag=False,
            delta_next=delta_next,
            center_evals=center_evals,
            stencil_evals=n,
            inner_evals=0,
            safeguard_evals=0,
            eval_count=oracle.eval_count,
            skipped=True,
            x=x.copy() if options.record_iterates else None,
        )
        state.delta = delta_next
        state.k += 1
        _update_status(state, oracle, options, n)
        return state

    gg = estimate.gg
    gg_norm = estimate.norm

    # Steps 2 and 3: subspace search and safeguard
    subspace_kind = None
    subspace_dim = 0
    membership_residual = None
    orthonormality_error = None
    if gg_norm == 0:
        outcome = safeguard_accept(oracle, x, f, gg, x, f, eta, delta)
    else:
        basis = build_subspace(
            options.subspace_kind, gg, x, state.x_prev, state.history, options.drop_tol
        )
        subspace_kind = basis.kind
        subspace_dim = basis.dim
        membership_residual = basis.membership_residual(gg)
        orthonormality_error = basis.orthonormality_error()
        inner_budget = options.inner.resolve_budget(basis.dim)
        remaining = oracle.remaining()
        if remaining is not None:
            # one evaluation stays reserved for the safeguard point
            inner_budget = min(inner_budget, remaining - 1)
        if inner_budget >= 1:
            x_s, f_s, inner_evals = solve_subspace(
                oracle,
                x,
                basis,
                options.inner,
                delta,
                f_center=f,
                budget=inner_budget,
                rng=rng,
            )
        else:
            x_s, f_s, inner_evals = x, f, 0
        outcome = safeguard_accept(
            oracle, x, f, gg, x_s, f_s, eta, delta, inner_evals=inner_evals
        )

    # Step 4: radius update
    delta_next = update_delta(delta, gg_norm, outcome.decrease_flag, eta)

    state.last_record = IterationRecord(
        k=state.k,
        f=f,
        delta=delta,
        gg_norm=gg_norm,
        subspace_kind=subspace_kind,
        subspace_dim=subspace_dim,
        f_safeguard=outcome.f_safeguard,
        f_next=outcome.f_next,
        accepted_via=outcome.accepted_via,
        decrease_flag=outcome.decrease_flag,
        delta_next=delta_next,
        center_evals=center_evals,
        stencil_evals=estimate.stencil_evals,
        inner_evals=outcome.evals_used - int(outcome.safeguard_evaluated),
        safeguard_evals=int(outcome.safeguard_evaluated),
        eval_count=oracle.eval_count,
        membership_residual=membership_residual,
        orthonormality_error=orthonormality_error,
        x=x.copy() if options.record_iterates else None,
    )
    # the pair ending at x_k joins the history only after S_k was built
    if state.x_prev is not None and state.gg is not None:
        s = x - state.x_prev
        if np.any(s):
            state.history.append(s, gg - state.gg)
    state.x_prev = x
    state.gg = gg
    state.x = np.array(outcome.x_next, dtype=float)
    state.f = outcome.f_next
    state.delta = delta_next
    state.k += 1
    _update_status(state, oracle, options, n)
    return state


def _update_status(
    state: SolverState, oracle: EvaluationOracle, options: SolverOptions, n: int
) -> None:
    if state.delta < options.delta_min:
        state.status = RunStatus.DELTA_CONVERGED
    elif _budget_short(oracle, n):
        state.status = RunStatus.BUDGET_EXHAUSTED


def minimize(
    problem: ProblemSpec,
    options: Optional[SolverOptions] = None,
    reporter: Optional[Reporter] = None,
    observers: Optional[Sequence[Observer]] = None,
) -> RunResult:
    """
    Minimize a problem from its standard start.

    Parameters
    ----------
    problem : ProblemSpec
        The problem to solve.
    options : SolverOptions, optional
        Solver configuration; defaults apply when omitted.
    reporter : Reporter, optional
        Receives per-iteration debug lines and the run summary.
    observers : Sequence[Observer], optional
        Invariant checks run after every iteration. Defaults to the standard
        set when ``options.check_invariants`` is on.
        Not used by the full-space baseline, which has no iterations.

    Returns
    -------
    RunResult
        Best point ever evaluated, status, evaluation trace and iteration log.
    """
    options = options if options is not None else SolverOptions()
    reporter = reporter if reporter is not None else Reporter()
    if options.algorithm is Algorithm.FULL_SPACE:
        from .fullspace import minimize_full_space

        return minimize_full_space(problem, options, reporter=reporter)
    if observers is None:
        observers = default_observers(options) if options.check_invariants else []

    n = problem.n
    oracle = EvaluationOracle(
        problem,
        truncation_digits=options.truncation_digits,
        max_evals=options.resolve_max_evals(n),
    )
    rng = np.random.default_rng(options.seed)
    state = SolverState(
        k=0,
        x=np.array(problem.x0, dtype=float),
        f=None,
        delta=options.delta0,
        history=HistoryPairs(options.memory_m),
    )

    reporter.info(
        f"Minimizing {problem.name} (n={n}) with {options.subspace_kind.value} subspace"
    )
    f0 = oracle.evaluate(state.x)
    state.f = f0
    if not math.isfinite(f0):
        reporter.warning(f"f(x0) is not finite for {problem.name}")
        state.status = RunStatus.STALLED

    iterations: List[IterationRecord] = []
    executor = ThreadPoolExecutor(options.workers) if options.workers > 1 else None
    try:
        while state.status is RunStatus.RUNNING:
            step(state, oracle, options, rng=rng, executor=executor)
            record = state.last_record
            if record is None:
                break
            iterations.append(record)
            reporter.log_iteration(record)
            for observer in observers:
                observer.observe(record, reporter)
    finally:
        if executor is not None:
            executor.shutdown()

    best_x = oracle.best_x if oracle.best_x is not None else state.x
    result = RunResult(
        x=best_x,
        f=oracle.best_f,
        status=state.status,
        trace=list(oracle.best_trace),
        iterations=iterations,
        nf=oracle.eval_count,
        f0=f0,
        failures=list(oracle.failures),
        violations=[v for observer in observers for v in observer.violations],
    )
    reporter.report_run(result)
    return result
