from .driver import RunResult, SolverOptions, minimize
from .problem import ProblemSpec, list_problems, make_problem

__version__ = "0.1.0"
