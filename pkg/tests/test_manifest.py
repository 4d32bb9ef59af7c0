import textwrap
import unittest

import pytest

from subdfo.constants import Algorithm, InnerMethod, SubspaceKind
from subdfo.exceptions import ManifestError
from subdfo.manifest import Manifest, ManifestSolver, load_manifest


def _write(tmp_path, text):
    path = tmp_path / "manifest.yml"
    path.write_text(textwrap.dedent(text))
    return str(path)


def test_load_sample(manifest_path):
    manifest = load_manifest(manifest_path)
    assert [(p.name, p.n) for p in manifest.problems] == [("sphere", 4), ("arwhead", 6)]
    assert [s.id for s in manifest.solvers] == ["cg", "lmqn", "lmqn-qm", "full-space"]
    assert manifest.tolerances == [0.1, 0.001]

    cg = manifest.solver_options(manifest.solvers[0])
    assert cg.subspace_kind is SubspaceKind.CG
    assert cg.max_evals == 120
    assert cg.truncation_digits == 3
    assert cg.inner.budget == 20

    qm = manifest.solver_options(manifest.solvers[2])
    assert qm.inner.method is InnerMethod.QUADRATIC_MODEL
    # nested inner keys merge with the defaults
    assert qm.inner.budget == 20

    baseline = manifest.solver_options(manifest.solvers[3])
    assert baseline.algorithm is Algorithm.FULL_SPACE


class TestManifestModel(unittest.TestCase):
    def test_default_tolerances(self):
        manifest = Manifest(
            problems=[{"name": "sphere", "n": 2}], solvers=[{"id": "a"}]
        )
        self.assertEqual(manifest.tolerances, [0.1, 0.001])

    def test_solver_overrides(self):
        solver = ManifestSolver(id="x", memory_m=2, eta=0.5)
        self.assertEqual(solver.overrides, {"memory_m": 2, "eta": 0.5})

    def test_duplicate_solver_ids(self):
        with self.assertRaises(ValueError):
            Manifest(
                problems=[{"name": "sphere", "n": 2}],
                solvers=[{"id": "a"}, {"id": "a", "eta": 0.5}],
            )

    def test_tolerance_range(self):
        with self.assertRaises(ValueError):
            Manifest(
                problems=[{"name": "sphere", "n": 2}],
                solvers=[{"id": "a"}],
                tolerances=[0.1, 1.5],
            )

    def test_needs_problems_and_solvers(self):
        with self.assertRaises(ValueError):
            Manifest(problems=[], solvers=[{"id": "a"}])
        with self.assertRaises(ValueError):
            Manifest(problems=[{"name": "sphere", "n": 2}], solvers=[])


@pytest.mark.parametrize(
    "text, fragment",
    [
        (
            """
            problems: [{name: sphere, n: 3}]
            solvers: [{id: a, subspace_kind: bfgs}]
            """,
            "solver 'a'",
        ),
        (
            """
            problems: [{name: sphere, n: 3}]
            solvers: [{id: a, no_such_option: 1}]
            """,
            "solver 'a'",
        ),
        (
            """
            problems: [{name: nosuchproblem, n: 3}]
            solvers: [{id: a}]
            """,
            "problem 'nosuchproblem'",
        ),
        (
            """
            problems: [{name: woods, n: 3}]
            solvers: [{id: a}]
            """,
            "problem 'woods'",
        ),
        ("- just\n- a list\n", "mapping"),
        ("problems: [unclosed\n", "invalid YAML"),
    ],
)
def test_invalid_manifests(tmp_path, text, fragment):
    with pytest.raises(ManifestError) as excinfo:
        load_manifest(_write(tmp_path, text))
    assert fragment in str(excinfo.value)


def test_missing_file(tmp_path):
    with pytest.raises(ManifestError):
        load_manifest(str(tmp_path / "absent.yml"))
