import unittest

import numpy as np
import pytest

from subdfo.constants import SubspaceKind
from subdfo.exceptions import SubspaceError
from subdfo.subspace import (
    HistoryPairs,
    build_cg_subspace,
    build_lmqn_qn_subspace,
    build_lmqn_subspace,
    build_subspace,
    orthonormalize,
    quasi_newton_direction,
)


def _assert_orthonormal(basis, tol=1e-10):
    m = basis.matrix
    np.testing.assert_allclose(m.T @ m, np.eye(basis.dim), atol=tol)


def _assert_contains(basis, v, tol=1e-10):
    residual = v - basis.project(v)
    assert np.linalg.norm(residual) <= tol * max(1.0, np.linalg.norm(v))


class TestHistoryPairs(unittest.TestCase):
    def test_eviction_is_oldest_first(self):
        history = HistoryPairs(2)
        for i in range(3):
            history.append(np.full(2, float(i)), np.full(2, float(i)))
        self.assertEqual(len(history), 2)
        self.assertEqual([s[0] for s, _ in history.pairs], [1.0, 2.0])
        self.assertEqual([s[0] for s, _ in history.newest_first()], [2.0, 1.0])

    def test_capacity_must_be_positive(self):
        with self.assertRaises(ValueError):
            HistoryPairs(0)


class TestCGSubspace(unittest.TestCase):
    def test_two_dimensional_example(self):
        basis = build_cg_subspace(
            np.array([1.0, 0.0, 0.0]), np.array([1.0, 1.0, 0.0]), np.array([1.0, 0.0, 0.0])
        )
        self.assertEqual(basis.dim, 2)
        np.testing.assert_allclose(basis.columns[0], [1, 0, 0])
        np.testing.assert_allclose(np.abs(basis.columns[1]), [0, 1, 0])

    def test_parallel_displacement_is_dropped(self):
        basis = build_cg_subspace(
            np.array([2.0, 0.0]), np.array([3.0, 0.0]), np.array([1.0, 0.0])
        )
        self.assertEqual(basis.dim, 1)

    def test_first_iteration(self):
        basis = build_cg_subspace(np.array([0.0, 3.0]), np.zeros(2))
        self.assertEqual(basis.dim, 1)
        np.testing.assert_allclose(basis.columns[0], [0, 1])

    def test_zero_gradient_is_an_error(self):
        with self.assertRaises(SubspaceError):
            build_cg_subspace(np.zeros(3), np.zeros(3), np.ones(3))


class TestLMQNSubspace(unittest.TestCase):
    def test_generators_span(self):
        rng = np.random.default_rng(0)
        n = 20
        history = HistoryPairs(3)
        for _ in range(3):
            history.append(rng.standard_normal(n), rng.standard_normal(n))
        gg = rng.standard_normal(n)
        basis = build_lmqn_subspace(gg, history)
        self.assertEqual(basis.dim, 7)
        _assert_orthonormal(basis)
        np.testing.assert_allclose(basis.columns[0], gg / np.linalg.norm(gg))
        for s, y in history.pairs:
            _assert_contains(basis, s)
            _assert_contains(basis, y)

    def test_dependent_generators_are_dropped(self):
        history = HistoryPairs(5)
        e1, e2 = np.eye(3)[:2]
        history.append(e1, e2)
        history.append(e1 + e2, 2 * e1)
        basis = build_lmqn_subspace(e1, history)
        self.assertEqual(basis.dim, 2)

    def test_empty_history_gives_gradient_line(self):
        basis = build_lmqn_subspace(np.array([0.0, 4.0]), HistoryPairs(5))
        self.assertEqual(basis.dim, 1)


class TestQuasiNewtonDirection(unittest.TestCase):
    def test_quadratic_with_exact_pairs(self):
        hessian = np.diag([1.0, 4.0])
        history = HistoryPairs(5)
        for s in np.eye(2):
            history.append(s, hessian @ s)
        gg = np.array([1.0, 1.0])
        direction = quasi_newton_direction(gg, history)
        np.testing.assert_allclose(direction, -np.linalg.solve(hessian, gg), atol=1e-12)

    def test_identity_pairs(self):
        history = HistoryPairs(5)
        history.append(np.array([1.0, 2.0]), np.array([1.0, 2.0]))
        direction = quasi_newton_direction(np.array([3.0, -1.0]), history)
        np.testing.assert_allclose(direction, [-3.0, 1.0], atol=1e-12)

    def test_negative_curvature_pairs_are_skipped(self):
        history = HistoryPairs(5)
        history.append(np.array([1.0, 0.0]), np.array([-1.0, 0.0]))
        self.assertIsNone(quasi_newton_direction(np.ones(2), history))

    def test_qn_subspace_contains_direction(self):
        rng = np.random.default_rng(4)
        n = 12
        a = np.diag(np.arange(1.0, n + 1))
        history = HistoryPairs(2)
        for _ in range(2):
            s = rng.standard_normal(n)
            history.append(s, a @ s)
        gg = rng.standard_normal(n)
        basis = build_lmqn_qn_subspace(gg, history)
        # the two-loop direction already lies in span{gg, s, y}
        self.assertEqual(basis.dim, 5)
        _assert_orthonormal(basis)
        _assert_contains(basis, quasi_newton_direction(gg, history))


def test_orthonormalize_matches_svd_rank():
    rng = np.random.default_rng(8)
    for trial in range(50):
        n = int(rng.integers(3, 30))
        k = int(rng.integers(1, 8))
        rank = int(rng.integers(1, min(n, k) + 1))
        factors = rng.standard_normal((n, rank)) @ rng.standard_normal((rank, k))
        vectors = [factors[:, j] for j in range(k)]
        q = np.column_stack(orthonormalize(vectors))
        assert q.shape[1] == rank
        np.testing.assert_allclose(q.T @ q, np.eye(rank), atol=1e-10)
        u, sigma, _ = np.linalg.svd(factors, full_matrices=False)
        reference = u[:, :rank]
        # same column space: projectors agree
        np.testing.assert_allclose(q @ q.T, reference @ reference.T, atol=1e-8)


@pytest.mark.parametrize("kind", list(SubspaceKind))
def test_dispatcher_keeps_gradient_first(kind):
    rng = np.random.default_rng(1)
    n = 15
    history = HistoryPairs(4)
    x_prev = rng.standard_normal(n)
    x_cur = x_prev + rng.standard_normal(n)
    for _ in range(4):
        s = rng.standard_normal(n)
        history.append(s, 3.0 * s + 0.1 * rng.standard_normal(n))
    gg = rng.standard_normal(n)
    basis = build_subspace(kind, gg, x_cur, x_prev, history)
    assert basis.kind is kind
    _assert_orthonormal(basis)
    np.testing.assert_allclose(basis.columns[0], gg / np.linalg.norm(gg))
    assert basis.dim <= n
    alpha = rng.standard_normal(basis.dim)
    np.testing.assert_allclose(basis.project(basis.lift(alpha)), basis.lift(alpha), atol=1e-12)
