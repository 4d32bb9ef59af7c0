from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, List, Optional

from .constants import BASIS_TOL
from .subsolver import sufficient_decrease, sufficient_decrease_threshold

if TYPE_CHECKING:
    from .driver import IterationRecord, SolverOptions
    from .reporter import Reporter


class Observer(ABC):
    """
    Checks one property of the run after every iteration.

    Violations are logged as warnings and kept in ``violations``.
    """

    def __init__(self):
        self.violations: List[str] = []

    @abstractmethod
    def observe(self, record: "IterationRecord", reporter: "Reporter") -> None:
        pass

    def _violation(self, reporter: "Reporter", message: str) -> None:
        self.violations.append(message)
        reporter.warning(f"{self.__class__.__name__}: {message}")


class MonotoneObserver(Observer):
    def __init__(self):
        super().__init__()
        self.last_f: Optional[float] = None

    def observe(self, record: "IterationRecord", reporter: "Reporter") -> None:
        if self.last_f is not None and record.f > self.last_f:
            self._violation(
                reporter, f"k={record.k}: f rose from {self.last_f!r} to {record.f!r}"
            )
        if record.f_next > record.f:
            self._violation(
                reporter, f"k={record.k}: accepted {record.f_next!r} above f_k={record.f!r}"
            )
        self.last_f = record.f_next


class SufficientDecreaseObserver(Observer):
    """
    Certifies f_{k+1} <= max{f_k - eta delta_k^2, f(x_k - delta_k gg_k/||gg_k||)}
    on the stored values, and f_k - f_{k+1} >= eta delta_k^2 whenever the
    decrease flag is set.
    """

    def __init__(self, eta: float):
        super().__init__()
        self.eta = eta

    def observe(self, record: "IterationRecord", reporter: "Reporter") -> None:
        if record.skipped:
            return
        decreased = sufficient_decrease(record.f, record.f_next, self.eta, record.delta)
        threshold = sufficient_decrease_threshold(record.f, self.eta, record.delta)
        bound = threshold
        if record.f_safeguard is not None:
            bound = max(threshold, record.f_safeguard)
        if record.f_next > bound and not decreased:
            self._violation(
                reporter, f"k={record.k}: f_next={record.f_next!r} exceeds bound {bound!r}"
            )
        if record.decrease_flag != decreased:
            self._violation(
                reporter,
                f"k={record.k}: decrease flag {record.decrease_flag} disagrees with "
                f"f_k={record.f!r}, f_next={record.f_next!r}",
            )


class DeltaRecurrenceObserver(Observer):
    """
    Replays the radius update from the logged gradient norm and decrease flag.
    """

    def __init__(self, eta: float):
        super().__init__()
        self.eta = eta
        self.last_delta: Optional[float] = None

    def observe(self, record: "IterationRecord", reporter: "Reporter") -> None:
        from .driver import update_delta

        if self.last_delta is not None and record.delta != self.last_delta:
            self._violation(
                reporter,
                f"k={record.k}: delta {record.delta!r} does not continue {self.last_delta!r}",
            )
        if record.skipped:
            expected = record.delta / 2
        else:
            expected = update_delta(
                record.delta, record.gg_norm, record.decrease_flag, self.eta
            )
        if record.delta_next != expected:
            self._violation(
                reporter,
                f"k={record.k}: delta_next={record.delta_next!r}, expected {expected!r}",
            )
        self.last_delta = record.delta_next


class EvaluationAccountingObserver(Observer):
    """
    Checks that per-iteration evaluation counts add up to the oracle's total.
    """

    def __init__(self, initial_evals: int = 1):
        super().__init__()
        self.total = initial_evals

    def observe(self, record: "IterationRecord", reporter: "Reporter") -> None:
        self.total += (
            record.center_evals
            + record.stencil_evals
            + record.inner_evals
            + record.safeguard_evals
        )
        if self.total != record.eval_count:
            self._violation(
                reporter,
                f"k={record.k}: counted {self.total} evaluations, oracle reports {record.eval_count}",
            )
            self.total = record.eval_count


class SubspaceObserver(Observer):
    """
    Checks that gg_k lies in S_k and that the basis of S_k is orthonormal.
    """

    def __init__(self, tol: float = BASIS_TOL):
        super().__init__()
        self.tol = tol

    def observe(self, record: "IterationRecord", reporter: "Reporter") -> None:
        if record.membership_residual is not None and record.membership_residual > self.tol:
            self._violation(
                reporter,
                f"k={record.k}: gg leaves the subspace, residual {record.membership_residual!r}",
            )
        if record.orthonormality_error is not None and record.orthonormality_error > self.tol:
            self._violation(
                reporter,
                f"k={record.k}: basis is not orthonormal, error {record.orthonormality_error!r}",
            )


def default_observers(options: "SolverOptions") -> List[Observer]:
    return [
        MonotoneObserver(),
        SufficientDecreaseObserver(options.eta),
        DeltaRecurrenceObserver(options.eta),
        EvaluationAccountingObserver(),
        SubspaceObserver(),
    ]
