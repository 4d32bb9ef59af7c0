import sys
from enum import Enum

# Algorithm defaults
ETA_DEFAULT = 1e-2
DELTA0_DEFAULT = 1.0
DELTA_MIN_DEFAULT = 1e-8
MEMORY_DEFAULT = 5
MAX_EVALS_FACTOR = 500
TAU_CONSTANT = 1.0

# Gradient stencil
STEP_FLOOR = sys.float_info.epsilon ** 0.5

# Subspace construction
DROP_TOL = 1e-10
CURVATURE_TOL = 1e-10
BASIS_TOL = 1e-10

# Inner solver
INNER_BUDGET_FACTOR = 10
INITIAL_SCALE_DEFAULT = 1.0
NM_REFLECTION = 1.0
NM_EXPANSION = 2.0
NM_CONTRACTION = 0.5
NM_SHRINK = 0.5
NM_XTOL = 1e-8
QM_ETA_ACCEPT = 0.1
QM_MIN_RADIUS = 1e-8

# Benchmark
DEFAULT_TOLERANCES = (1e-1, 1e-3)
OUTPUT_DIR_ENV = "SUBDFO_OUTPUT_DIR"
OUTPUT_DIR_DEFAULT = "results"
RUNS_CSV_HEADER = ("solver_id", "problem_id", "n", "f0", "f_fin", "NF", "status")
TRACES_CSV_HEADER = ("solver_id", "problem_id", "eval", "best_f")
PROFILE_CSV_HEADER = ("solver_id", "log2_ratio", "fraction_solved")


class Algorithm(str, Enum):
    SUBSPACE = "subspace"
    FULL_SPACE = "full-space"


class SubspaceKind(str, Enum):
    CG = "cg"
    LMQN = "lmqn"
    LMQN_QN = "lmqn-qn"


class InnerMethod(str, Enum):
    NELDER_MEAD = "nelder-mead"
    QUADRATIC_MODEL = "quadratic-model"


class RunStatus(str, Enum):
    RUNNING = "running"
    DELTA_CONVERGED = "delta_converged"
    BUDGET_EXHAUSTED = "budget_exhausted"
    STALLED = "stalled"


class AcceptedVia(str, Enum):
    SUBSPACE = "subspace"
    SAFEGUARD = "safeguard"
    STAY = "stay"
