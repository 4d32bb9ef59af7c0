"""
Forward-difference gradient estimation on the coordinate stencil

    Y_k = {x_k} U {x_k + tau * delta_k * e_i : i = 1..n}.

Linear interpolation on this set is a forward finite difference, accurate to
``tau * sqrt(n) * L * delta_k / 2`` when the gradient is L-Lipschitz.
"""

import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence

import numpy as np

from .constants import STEP_FLOOR, TAU_CONSTANT
from .exceptions import GradientEstimationError


@dataclass
class GradientEstimate:
    """
    Result of one forward-difference estimate.

    Attributes
    ----------
    gg : np.ndarray
        The approximate gradient.
    step : float
        Finite-difference step actually used.
    stencil_evals : int
        New function evaluations spent on the stencil.
    """

    gg: np.ndarray
    step: float
    stencil_evals: int

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.gg))


def default_tau(n: int) -> float:
    """
    Default stencil scale tau = n^(-1/2), which keeps the accuracy constant
    tau * sqrt(n) * L / 2 independent of the dimension.
    """
    if n < 1:
        raise ValueError(f"Dimension must be positive, got {n}")
    return TAU_CONSTANT / math.sqrt(n)


def stencil_step(x: np.ndarray, delta: float, tau: float) -> float:
    """
    Step length tau * delta, floored at sqrt(eps) * max(1, ||x||_inf) so the
    differences do not drown in cancellation when delta is tiny.
    """
    scale = max(1.0, float(np.max(np.abs(x)))) if x.size else 1.0
    return max(tau * delta, STEP_FLOOR * scale)


def stencil_points(x: np.ndarray, step: float) -> Iterator[np.ndarray]:
    """
    Lazily yield x followed by x + step * e_i for i = 1..n.
    """
    yield np.array(x, dtype=float)
    for i in range(x.size):
        point = np.array(x, dtype=float)
        point[i] += step
        yield point


def build_stencil(x: np.ndarray, delta: float, tau: float) -> List[np.ndarray]:
    """
    Build the n + 1 stencil points [x, x + tau*delta*e_1, ..., x + tau*delta*e_n].

    Parameters
    ----------
    x : np.ndarray
        Stencil center.
    delta : float
        Radius parameter, delta > 0.
    tau : float
        Stencil scale, tau > 0.

    Returns
    -------
    List[np.ndarray]
        The stencil, center first.
    """
    if delta <= 0 or tau <= 0:
        raise ValueError(f"delta and tau must be positive, got {delta}, {tau}")
    return list(stencil_points(np.asarray(x, dtype=float), tau * delta))


def estimate_gradient(
    values: Sequence[float], step: float, stencil_evals: Optional[int] = None
) -> GradientEstimate:
    """
    Forward-difference gradient from stencil values.

    Parameters
    ----------
    values : Sequence[float]
        f at the center followed by f at center + step * e_i, i = 1..n.
    step : float
        The stencil step.
    stencil_evals : int, optional
        Evaluations actually spent (defaults to len(values)).

    Returns
    -------
    GradientEstimate

    Raises
    ------
    GradientEstimationError
        If any value is not finite; carries the offending index.
    """
    values = np.asarray(values, dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise GradientEstimationError(int(bad[0]))
    gg = (values[1:] - values[0]) / step
    if stencil_evals is None:
        stencil_evals = values.size
    return GradientEstimate(gg=gg, step=step, stencil_evals=stencil_evals)
