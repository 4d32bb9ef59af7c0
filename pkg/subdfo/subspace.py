import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .constants import CURVATURE_TOL, DROP_TOL, MEMORY_DEFAULT, SubspaceKind
from .exceptions import SubspaceError

logger = logging.getLogger(__name__)


class HistoryPairs:
    """
    Bounded history of (s, y) pairs, newest last.

    s_l = x_{l+1} - x_l and y_l = gg_{l+1} - gg_l as recorded by the driver.
    When full, appending evicts the oldest pair.

    Parameters
    ----------
    capacity : int
        Memory m, at least 1.
    """

    def __init__(self, capacity: int = MEMORY_DEFAULT):
        if capacity < 1:
            raise ValueError(f"History capacity must be positive, got {capacity}")
        self.capacity = capacity
        self._pairs = deque(maxlen=capacity)

    def append(self, s: np.ndarray, y: np.ndarray) -> None:
        self._pairs.append((np.array(s, dtype=float), np.array(y, dtype=float)))

    @property
    def pairs(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        return list(self._pairs)

    def newest_first(self) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        return reversed(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def __repr__(self):
        return f"HistoryPairs(capacity={self.capacity}, size={len(self)})"


@dataclass
class SubspaceBasis:
    """
    Orthonormal basis of the search subspace.

    Attributes
    ----------
    matrix : np.ndarray
        (n, p) matrix with orthonormal columns; the first column is gg/||gg||.
    kind : SubspaceKind
        The recipe that produced the basis.
    """

    matrix: np.ndarray
    kind: SubspaceKind

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def columns(self) -> List[np.ndarray]:
        return [self.matrix[:, j] for j in range(self.dim)]

    def lift(self, alpha: np.ndarray) -> np.ndarray:
        return self.matrix @ alpha

    def project(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ (self.matrix.T @ v)

    def membership_residual(self, v: np.ndarray) -> float:
        """
        Relative distance ||v - B B^T v|| / ||v|| of v from the span (0 for v = 0).
        """
        norm = np.linalg.norm(v)
        if norm == 0:
            return 0.0
        return float(np.linalg.norm(v - self.project(v)) / norm)

    def orthonormality_error(self) -> float:
        """
        Largest entry of |B^T B - I|.
        """
        gram = self.matrix.T @ self.matrix
        return float(np.max(np.abs(gram - np.eye(self.dim))))


def orthonormalize(
    vectors: Sequence[np.ndarray], drop_tol: float = DROP_TOL
) -> List[np.ndarray]:
    """
    Gram-Schmidt with one reorthogonalization pass, in the given order.

    A vector is dropped when the norm of its residual after projection is at
    most ``drop_tol`` times its original norm.

    Parameters
    ----------
    vectors : Sequence[np.ndarray]
        Generating vectors, processed in order.
    drop_tol : float
        Relative residual threshold in (0, 1).

    Returns
    -------
    List[np.ndarray]
        Orthonormal vectors spanning the numerically independent subset;
        empty when every input is (numerically) zero.
    """
    basis: List[np.ndarray] = []
    for v in vectors:
        v = np.asarray(v, dtype=float)
        original = np.linalg.norm(v)
        if original == 0 or not np.isfinite(original):
            continue
        w = v.copy()
        for _ in range(2):
            for q in basis:
                w -= np.dot(q, w) * q
        residual = np.linalg.norm(w)
        if residual <= drop_tol * original:
            continue
        basis.append(w / residual)
    return basis


def _as_basis(columns: List[np.ndarray], n: int, kind: SubspaceKind) -> SubspaceBasis:
    if not columns:
        raise SubspaceError("Subspace generators are all zero")
    return SubspaceBasis(matrix=np.column_stack(columns).reshape(n, -1), kind=kind)


def build_cg_subspace(
    gg: np.ndarray,
    x_cur: np.ndarray,
    x_prev: Optional[np.ndarray] = None,
    drop_tol: float = DROP_TOL,
) -> SubspaceBasis:
    """
    Conjugate-gradient subspace span{gg, x_cur - x_prev}.

    gg is processed first so it is always retained; the displacement is
    dropped when absent or dependent.
    """
    generators = [gg]
    if x_prev is not None:
        generators.append(np.asarray(x_cur) - np.asarray(x_prev))
    return _as_basis(orthonormalize(generators, drop_tol), gg.size, SubspaceKind.CG)


def _lmqn_generators(gg: np.ndarray, history: HistoryPairs) -> List[np.ndarray]:
    generators = [gg]
    for s, y in history.newest_first():
        generators.append(y)
        generators.append(s)
    return generators


def build_lmqn_subspace(
    gg: np.ndarray, history: HistoryPairs, drop_tol: float = DROP_TOL
) -> SubspaceBasis:
    """
    Limited-memory quasi-Newton subspace span{gg, y_{k-1}, ..., s_{k-1}, ...}.

    Generators are taken gg first, then pairs newest-first with y before s.
    """
    columns = orthonormalize(_lmqn_generators(gg, history), drop_tol)
    return _as_basis(columns, gg.size, SubspaceKind.LMQN)


def quasi_newton_direction(
    gg: np.ndarray, history: HistoryPairs, curvature_tol: float = CURVATURE_TOL
) -> Optional[np.ndarray]:
    """
    Limited-memory BFGS direction d ~ -H^{-1} gg by the two-loop recursion.

    Pairs with s.y <= curvature_tol * ||s|| * ||y|| are skipped. The initial
    scaling is gamma = s.y / y.y of the newest usable pair.

    Returns
    -------
    np.ndarray or None
        The direction, or None when no usable pair exists.
    """
    usable = []
    for s, y in history.pairs:
        sy = float(np.dot(s, y))
        if sy > curvature_tol * np.linalg.norm(s) * np.linalg.norm(y):
            usable.append((s, y, 1.0 / sy))
    if not usable:
        return None

    q = np.array(gg, dtype=float)
    alphas = []
    for s, y, rho in reversed(usable):
        alpha = rho * np.dot(s, q)
        q -= alpha * y
        alphas.append(alpha)

    s_last, y_last, _ = usable[-1]
    r = (np.dot(s_last, y_last) / np.dot(y_last, y_last)) * q

    for (s, y, rho), alpha in zip(usable, reversed(alphas)):
        beta = rho * np.dot(y, r)
        r += s * (alpha - beta)
    return -r


def build_lmqn_qn_subspace(
    gg: np.ndarray,
    history: HistoryPairs,
    drop_tol: float = DROP_TOL,
    curvature_tol: float = CURVATURE_TOL,
) -> SubspaceBasis:
    """
    LMQN subspace augmented with the quasi-Newton direction as the last
    generator (when one can be built).
    """
    generators = _lmqn_generators(gg, history)
    direction = quasi_newton_direction(gg, history, curvature_tol)
    if direction is not None:
        generators.append(direction)
    columns = orthonormalize(generators, drop_tol)
    return _as_basis(columns, gg.size, SubspaceKind.LMQN_QN)


def build_subspace(
    kind: SubspaceKind,
    gg: np.ndarray,
    x_cur: np.ndarray,
    x_prev: Optional[np.ndarray],
    history: HistoryPairs,
    drop_tol: float = DROP_TOL,
) -> SubspaceBasis:
    """
    Dispatch to the subspace recipe selected by ``kind``.
    """
    kind = SubspaceKind(kind)
    if kind is SubspaceKind.CG:
        basis = build_cg_subspace(gg, x_cur, x_prev, drop_tol)
    elif kind is SubspaceKind.LMQN:
        basis = build_lmqn_subspace(gg, history, drop_tol)
    else:
        basis = build_lmqn_qn_subspace(gg, history, drop_tol)
    logger.debug(f"Built {kind.value} subspace of dimension {basis.dim}")
    return basis
