import math
import unittest

import numpy as np
import pytest

from subdfo.exceptions import GradientEstimationError
from subdfo.gradient import (
    build_stencil,
    default_tau,
    estimate_gradient,
    stencil_points,
    stencil_step,
)


class TestStencil(unittest.TestCase):
    def test_build_stencil(self):
        stencil = build_stencil(np.array([0.0, 0.0]), 1.0, 0.5)
        np.testing.assert_array_equal(np.array(stencil), [[0, 0], [0.5, 0], [0, 0.5]])

    def test_nonpositive_parameters(self):
        with self.assertRaises(ValueError):
            build_stencil(np.zeros(2), 0.0, 0.5)
        with self.assertRaises(ValueError):
            build_stencil(np.zeros(2), 1.0, -1.0)

    def test_points_are_lazy(self):
        points = stencil_points(np.zeros(10000), 0.1)
        center = next(points)
        first = next(points)
        self.assertEqual(center.sum(), 0.0)
        self.assertEqual(first[0], 0.1)
        self.assertEqual(first[1:].sum(), 0.0)

    def test_step_floor(self):
        x = np.array([1e4, 0.0])
        self.assertEqual(stencil_step(x, 1.0, 0.5), 0.5)
        floor = stencil_step(x, 1e-20, 0.5)
        self.assertAlmostEqual(floor, math.sqrt(np.finfo(float).eps) * 1e4)

    def test_default_tau(self):
        self.assertEqual(default_tau(4), 0.5)
        self.assertEqual(default_tau(1), 1.0)
        with self.assertRaises(ValueError):
            default_tau(0)


class TestEstimateGradient(unittest.TestCase):
    def test_sphere_example(self):
        # f = x1^2 + x2^2 at (1, 0), step 0.5
        estimate = estimate_gradient([1.0, 2.25, 1.25], 0.5)
        np.testing.assert_allclose(estimate.gg, [2.5, 0.5])
        self.assertEqual(estimate.stencil_evals, 3)

    def test_affine_is_exact(self):
        x = np.array([0.3, -1.2, 4.0])
        step = 0.25
        values = [7.0 + np.dot([1.0, 2.0, -3.0], p) for p in stencil_points(x, step)]
        estimate = estimate_gradient(values, step)
        np.testing.assert_allclose(estimate.gg, [1.0, 2.0, -3.0], atol=1e-12)

    def test_half_squared_norm(self):
        x = np.array([1.0, 1.0])
        values = [0.5 * p @ p for p in stencil_points(x, 0.2)]
        estimate = estimate_gradient(values, 0.2)
        np.testing.assert_allclose(estimate.gg, [1.1, 1.1], atol=1e-12)
        self.assertAlmostEqual(np.linalg.norm(estimate.gg - x), 0.1 * math.sqrt(2), places=12)

    def test_constant_gives_zero(self):
        estimate = estimate_gradient([5.0] * 4, 0.1, stencil_evals=3)
        np.testing.assert_array_equal(estimate.gg, np.zeros(3))
        self.assertEqual(estimate.norm, 0.0)
        self.assertEqual(estimate.stencil_evals, 3)

    def test_non_finite_value_reports_index(self):
        with self.assertRaises(GradientEstimationError) as ctx:
            estimate_gradient([1.0, 2.0, math.inf, math.nan], 0.1)
        self.assertEqual(ctx.exception.index, 2)


@pytest.mark.parametrize("n", [2, 10, 50])
def test_accuracy_bound_on_random_quadratics(n):
    rng = np.random.default_rng(n)
    tau = default_tau(n)
    for _ in range(100):
        m = rng.standard_normal((n, n))
        a = m @ m.T + 1e-3 * np.eye(n)
        b = rng.standard_normal(n)
        L = float(np.linalg.eigvalsh(a).max())
        x = rng.standard_normal(n)
        delta = float(10 ** rng.uniform(-3, 0))

        def f(z):
            return 0.5 * z @ a @ z + b @ z

        step = stencil_step(x, delta, tau)
        values = [f(p) for p in stencil_points(x, step)]
        gg = estimate_gradient(values, step).gg
        error = np.linalg.norm(gg - (a @ x + b))
        # step = tau * delta here, so this is tau sqrt(n) L delta / 2
        bound = math.sqrt(n) * L * step / 2
        assert error <= bound * (1 + 1e-8)
