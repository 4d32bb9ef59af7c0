import logging
import math
from decimal import ROUND_DOWN, Decimal
from threading import Lock
from typing import List, Optional, Tuple

import numpy as np

from .exceptions import BudgetExhaustedError, EvaluationError
from .problem import ProblemSpec

logger = logging.getLogger(__name__)

# significant digits of the shortest round-tripping repr of a double
FLOAT_DIGITS = 17


def truncate_value(v: float, d: int) -> float:
    """
    Chop a value to its first d significant decimal digits, toward zero.

    Parameters
    ----------
    v : float
        Value to truncate. Zero and non-finite values are returned unchanged.
    d : int
        Number of significant digits kept, d >= 1.

    Returns
    -------
    float
        The truncated value, with the sign of v.
    """
    if d < 1:
        raise ValueError(f"Number of significant digits must be positive, got {d}")
    if v == 0 or not math.isfinite(v) or d >= FLOAT_DIGITS:
        return v
    # repr gives the shortest decimal that round-trips, so 0.29 stays 0.29
    exact = Decimal(repr(float(v)))
    quantum = Decimal(1).scaleb(exact.adjusted() - d + 1)
    return float(exact.quantize(quantum, rounding=ROUND_DOWN))


class EvaluationOracle:
    """
    Counting, optionally truncating wrapper around a problem's objective.

    The oracle is the only path through which solvers see function values.
    A failed evaluation (non-finite output, arithmetic or domain error) is counted,
    recorded in ``failures`` and returned as +inf.

    Parameters
    ----------
    problem : ProblemSpec
        The problem whose objective is evaluated.
    truncation_digits : int, optional
        When set, every returned value is ``truncate_value(raw, d)``.
    max_evals : int, optional
        Hard cap; evaluating beyond it raises ``BudgetExhaustedError``.

    Attributes
    ----------
    eval_count : int
        Number of completed evaluations.
    best_trace : List[Tuple[int, float]]
        One (eval index, best value so far) entry per evaluation.
    failures : List[int]
        Eval indices whose raw value was not finite.
    best_x : np.ndarray or None
        First point that attained ``best_f``.
    best_f : float
        Best returned value so far (+inf before any evaluation).
    lock : Lock
        Guards counters and trace so that each evaluation is one event.

    Methods
    -------
    evaluate(x: np.ndarray) -> float:
        Evaluate the objective at x.
    remaining() -> Optional[int]:
        Evaluations left under the cap.
    """

    def __init__(
        self,
        problem: ProblemSpec,
        truncation_digits: Optional[int] = None,
        max_evals: Optional[int] = None,
    ):
        if truncation_digits is not None and truncation_digits < 1:
            raise ValueError(
                f"truncation_digits must be positive, got {truncation_digits}"
            )
        self.problem = problem
        self.truncation_digits = truncation_digits
        self.max_evals = max_evals
        self.eval_count = 0
        self.best_trace: List[Tuple[int, float]] = []
        self.failures: List[int] = []
        self.best_x: Optional[np.ndarray] = None
        self.best_f = math.inf
        self.lock = Lock()
        self._issued = 0

    def remaining(self) -> Optional[int]:
        if self.max_evals is None:
            return None
        with self.lock:
            return self.max_evals - self._issued

    def _raw_value(self, x: np.ndarray) -> float:
        if not np.all(np.isfinite(x)):
            return math.inf
        try:
            with np.errstate(all="ignore"):
                value = float(self.problem.objective(x))
        except (ArithmeticError, ValueError) as e:
            logger.debug(f"Objective raised {type(e).__name__}: {e}")
            return math.inf
        return value

    def evaluate(self, x: np.ndarray) -> float:
        """
        Evaluate the (optionally truncated) objective at x.

        Parameters
        ----------
        x : np.ndarray
            Point of dimension ``problem.n``.

        Returns
        -------
        float
            The objective value, or +inf when the evaluation failed.

        Raises
        ------
        EvaluationError
            If x does not have shape (n,).
        BudgetExhaustedError
            If the evaluation cap has been reached.
        """
        x = np.asarray(x, dtype=float)
        if x.shape != (self.problem.n,):
            raise EvaluationError(
                f"Point has shape {x.shape}, expected ({self.problem.n},)"
            )

        with self.lock:
            if self.max_evals is not None and self._issued >= self.max_evals:
                raise BudgetExhaustedError(
                    f"Evaluation budget of {self.max_evals} exhausted"
                )
            self._issued += 1

        raw = self._raw_value(x)
        failed = not math.isfinite(raw)
        if failed:
            value = math.inf
        elif self.truncation_digits is not None:
            value = truncate_value(raw, self.truncation_digits)
        else:
            value = raw

        with self.lock:
            self.eval_count += 1
            if failed:
                self.failures.append(self.eval_count)
            if value < self.best_f:
                self.best_f = value
                self.best_x = x.copy()
            self.best_trace.append((self.eval_count, self.best_f))
        return value
