import logging
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional

import numpy as np
import yaml

from .exceptions import CatalogError
from .objectives import FUNCTIONS

logger = logging.getLogger(__name__)

CATALOG_DIR = os.path.join(os.path.dirname(__file__), "problems")


@dataclass
class ProblemSpec:
    """
    A named objective with its dimension, standard start and test oracles.

    Attributes
    ----------
    name : str
        Catalog name of the problem.
    n : int
        Dimension.
    objective : Callable[[np.ndarray], float]
        The function to minimize.
    x0 : np.ndarray
        Standard starting point.
    analytic_gradient : Callable[[np.ndarray], np.ndarray], optional
        Exact gradient, used only by tests and theory probes.
    lipschitz_L : float, optional
        Lipschitz constant of the gradient when known.
    f_lower : float, optional
        Best known objective value, used by convergence tests.
    description : str
        Short human readable definition.
    """

    name: str
    n: int
    objective: Callable[[np.ndarray], float]
    x0: np.ndarray
    analytic_gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None
    lipschitz_L: Optional[float] = None
    f_lower: Optional[float] = None
    description: str = field(default="")

    def __post_init__(self):
        if self.n < 1:
            raise CatalogError("n", f"dimension must be positive, got {self.n}")
        self.x0 = np.asarray(self.x0, dtype=float)
        if self.x0.shape != (self.n,):
            raise CatalogError(
                "n", f"start point has shape {self.x0.shape}, expected ({self.n},)"
            )


def _scaled_constant(spec: Optional[dict], n: int) -> Optional[float]:
    """
    Evaluate a catalog constant of the form ``coefficient * n**power_of_n + offset``.
    """
    if spec is None:
        return None
    coefficient = float(spec.get("coefficient", 0.0))
    power = float(spec.get("power_of_n", 0))
    offset = float(spec.get("offset", 0.0))
    return coefficient * float(n) ** power + offset


@lru_cache(maxsize=None)
def load_catalog() -> Dict[str, dict]:
    """
    Load the problem metadata shipped in ``subdfo/problems``.

    Returns
    -------
    Dict[str, dict]
        Metadata keyed by problem name.
    """
    catalog = {}
    for filename in sorted(os.listdir(CATALOG_DIR)):
        if not filename.endswith(".yml"):
            continue
        with open(os.path.join(CATALOG_DIR, filename), "r", encoding="utf-8") as f:
            entry = yaml.safe_load(f)
        if entry["name"] not in FUNCTIONS:
            logger.warning(f"Catalog entry '{entry['name']}' has no objective; skipped")
            continue
        catalog[entry["name"]] = entry
    return catalog


def list_problems() -> List[str]:
    return sorted(load_catalog())


def describe_problem(name: str) -> dict:
    """
    Return the catalog metadata of a problem.

    Raises
    ------
    CatalogError
        If the name is not in the catalog.
    """
    catalog = load_catalog()
    if name not in catalog:
        raise CatalogError("name", f"unknown problem '{name}'")
    return dict(catalog[name])


def make_problem(name: str, n: int) -> ProblemSpec:
    """
    Build a catalog problem at dimension n with its standard start.

    Parameters
    ----------
    name : str
        Catalog name, see ``list_problems()``.
    n : int
        Requested dimension.

    Returns
    -------
    ProblemSpec
        Fully populated problem.

    Raises
    ------
    CatalogError
        If the name is unknown or n is outside the problem's validity range.
    """
    entry = describe_problem(name)
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise CatalogError("n", f"dimension must be an integer, got {n!r}")
    n = int(n)
    min_n = int(entry.get("min_n", 1))
    if n < min_n:
        raise CatalogError("n", f"{name} requires n >= {min_n}, got {n}")
    multiple_of = entry.get("multiple_of")
    if multiple_of and n % int(multiple_of) != 0:
        raise CatalogError("n", f"{name} requires n divisible by {multiple_of}, got {n}")

    objective, gradient, start = FUNCTIONS[name]
    return ProblemSpec(
        name=name,
        n=n,
        objective=objective,
        x0=start(n),
        analytic_gradient=gradient,
        lipschitz_L=_scaled_constant(entry.get("lipschitz"), n),
        f_lower=_scaled_constant(entry.get("f_lower"), n),
        description=entry.get("description", ""),
    )
