import logging
from typing import Any, Dict, List

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .constants import DEFAULT_TOLERANCES
from .driver import SolverOptions
from .exceptions import CatalogError, ManifestError, OptionsError
from .problem import make_problem

logger = logging.getLogger(__name__)


class ManifestProblem(BaseModel):
    name: str = Field(..., description="Catalog name of the problem.")
    n: int = Field(..., ge=1, description="Dimension of the instance.")


class ManifestSolver(BaseModel):
    """
    A named solver configuration. Every key besides ``id`` is a
    SolverOptions field.
    """

    model_config = ConfigDict(extra="allow")

    id: str = Field(..., min_length=1, description="Solver name used in all outputs.")

    @property
    def overrides(self) -> Dict[str, Any]:
        return dict(self.model_extra or {})


class Manifest(BaseModel):
    """
    Benchmark matrix: problems x solvers, plus profile tolerances.
    """

    problems: List[ManifestProblem] = Field(
        ..., min_length=1, description="Problem instances to run."
    )
    solvers: List[ManifestSolver] = Field(
        ..., min_length=1, description="Solver configurations to compare."
    )
    defaults: Dict[str, Any] = Field(
        default_factory=dict,
        description="SolverOptions fields applied to every solver before its own keys.",
    )
    tolerances: List[float] = Field(
        default_factory=lambda: list(DEFAULT_TOLERANCES),
        description="Convergence test tolerances, one profile each.",
    )

    @field_validator("tolerances")
    @classmethod
    def _check_tolerances(cls, values: List[float]) -> List[float]:
        for tol in values:
            if not 0 < tol < 1:
                raise ValueError(f"tolerance {tol} is not in (0, 1)")
        return values

    @model_validator(mode="after")
    def _check_unique_ids(self) -> "Manifest":
        ids = [solver.id for solver in self.solvers]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise ValueError(f"duplicate solver ids {duplicates}")
        return self

    def solver_options(self, solver: ManifestSolver) -> SolverOptions:
        values = dict(self.defaults)
        for key, value in solver.overrides.items():
            if key == "inner" and isinstance(value, dict):
                value = {**values.get("inner", {}), **value}
            values[key] = value
        return SolverOptions.from_mapping(values)


def load_manifest(path: str) -> Manifest:
    """
    Load and fully validate a benchmark manifest.

    Parameters
    ----------
    path : str
        YAML file, see docs/Manifest.md.

    Returns
    -------
    Manifest

    Raises
    ------
    ManifestError
        If the file cannot be read or parsed, or any problem or solver
        configuration is invalid.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ManifestError(f"{path}: {e}") from e
    except yaml.YAMLError as e:
        raise ManifestError(f"{path}: invalid YAML: {e}") from e

    if not isinstance(data, dict):
        raise ManifestError(f"{path}: expected a mapping at the top level")
    try:
        manifest = Manifest.model_validate(data)
    except ValidationError as e:
        raise ManifestError(f"{path}: {e}") from e

    for solver in manifest.solvers:
        try:
            manifest.solver_options(solver)
        except OptionsError as e:
            raise ManifestError(f"{path}: solver '{solver.id}': {e}") from e
    for problem in manifest.problems:
        try:
            make_problem(problem.name, problem.n)
        except CatalogError as e:
            raise ManifestError(f"{path}: problem '{problem.name}': {e}") from e

    logger.info(
        f"Loaded manifest with {len(manifest.problems)} problems and "
        f"{len(manifest.solvers)} solvers"
    )
    return manifest
