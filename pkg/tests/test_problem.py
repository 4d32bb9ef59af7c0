import unittest

import numpy as np
import pytest

from subdfo.exceptions import CatalogError
from subdfo.oracle import truncate_value
from subdfo.problem import describe_problem, list_problems, load_catalog, make_problem

REQUIRED = [
    "arwhead",
    "chrosen",
    "rosenbrock",
    "sphere",
    "power",
    "sparsqur",
    "nondia",
    "woods",
    "eg2",
    "liarwhd",
    "engval1",
    "brybnd",
]


def _test_dimension(name):
    return 8 if name == "woods" else 7


class TestCatalog(unittest.TestCase):
    def test_lists_required_problems(self):
        names = list_problems()
        self.assertGreaterEqual(len(names), 12)
        for name in REQUIRED:
            self.assertIn(name, names)
        self.assertEqual(names, sorted(names))

    def test_describe(self):
        entry = describe_problem("woods")
        self.assertEqual(entry["multiple_of"], 4)
        self.assertIn("description", entry)

    def test_unknown_name(self):
        with self.assertRaises(CatalogError) as ctx:
            make_problem("nosuchproblem", 10)
        self.assertEqual(ctx.exception.field, "name")

    def test_invalid_dimension(self):
        with self.assertRaises(CatalogError) as ctx:
            make_problem("woods", 10)
        self.assertEqual(ctx.exception.field, "n")
        with self.assertRaises(CatalogError):
            make_problem("arwhead", 1)
        with self.assertRaises(CatalogError):
            make_problem("sphere", 2.5)

    def test_sphere(self):
        problem = make_problem("sphere", 3)
        self.assertEqual(problem.objective(np.array([1.0, 2.0, 2.0])), 9.0)
        self.assertEqual(problem.f_lower, 0.0)
        self.assertEqual(problem.lipschitz_L, 2.0)

    def test_arwhead_start_value(self):
        problem = make_problem("arwhead", 100)
        self.assertEqual(problem.objective(problem.x0), 297.0)

    def test_diagquad_lipschitz(self):
        problem = make_problem("diagquad", 10)
        self.assertEqual(problem.lipschitz_L, 10.0)
        np.testing.assert_array_equal(problem.x0, np.ones(10))

    def test_woods_start(self):
        problem = make_problem("woods", 8)
        np.testing.assert_array_equal(problem.x0, [-3, -1, -3, -1, -3, -1, -3, -1])


@pytest.mark.parametrize("name", list_problems())
def test_analytic_gradient_matches_central_differences(name):
    problem = make_problem(name, _test_dimension(name))
    rng = np.random.default_rng(11)
    for _ in range(10):
        x = problem.x0 + 0.1 * rng.standard_normal(problem.n)
        h = 1e-6 * max(1.0, np.linalg.norm(x))
        numeric = np.array(
            [
                (problem.objective(x + h * e) - problem.objective(x - h * e)) / (2 * h)
                for e in np.eye(problem.n)
            ]
        )
        analytic = problem.analytic_gradient(x)
        error = np.linalg.norm(analytic - numeric)
        assert error <= 1e-4 * max(1.0, np.linalg.norm(analytic))


@pytest.mark.parametrize("name", list_problems())
def test_start_value_is_finite(name):
    problem = make_problem(name, _test_dimension(name))
    assert np.isfinite(problem.objective(problem.x0))
    if problem.f_lower is not None:
        assert problem.f_lower <= problem.objective(problem.x0)


@pytest.mark.parametrize(
    "name",
    [name for name, entry in sorted(load_catalog().items()) if "reference_f0" in entry],
)
def test_reference_start_values(name):
    reference = describe_problem(name)["reference_f0"]
    problem = make_problem(name, reference["n"])
    value = truncate_value(problem.objective(problem.x0), 3)
    assert value == pytest.approx(reference["value"], rel=1e-2)


@pytest.mark.parametrize("name", ["nondia", "eg2"])
def test_documented_start_value_mismatches(name):
    mismatch = describe_problem(name)["reference_f0_mismatch"]
    problem = make_problem(name, mismatch["n"])
    value = truncate_value(problem.objective(problem.x0), 3)
    assert value == pytest.approx(mismatch["computed"], rel=1e-2)
    assert value != pytest.approx(mismatch["published"], rel=1e-2)
