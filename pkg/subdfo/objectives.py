"""
Native objective functions and analytic gradients for the problem catalog.

Every function takes a 1-D numpy array and returns a float (objective) or an
array of the same shape (gradient). Formulas follow the usual unconstrained
CUTEst definitions of the variable-dimension problems; indices in comments
are 1-based like the SIF sources.
"""

from typing import Callable, Dict, Tuple

import numpy as np

Objective = Callable[[np.ndarray], float]
Gradient = Callable[[np.ndarray], np.ndarray]


def arwhead(x: np.ndarray) -> float:
    # sum_{i<n} (x_i^2 + x_n^2)^2 - 4 x_i + 3
    head = x[:-1]
    t = head**2 + x[-1] ** 2
    return float(np.sum(t**2 - 4.0 * head + 3.0))


def arwhead_grad(x: np.ndarray) -> np.ndarray:
    head = x[:-1]
    t = head**2 + x[-1] ** 2
    g = np.empty_like(x)
    g[:-1] = 4.0 * head * t - 4.0
    g[-1] = np.sum(4.0 * x[-1] * t)
    return g


def chrosen(x: np.ndarray) -> float:
    # sum_{i<n} 4 (x_i - x_{i+1}^2)^2 + (1 - x_{i+1})^2
    r = x[:-1] - x[1:] ** 2
    return float(np.sum(4.0 * r**2 + (1.0 - x[1:]) ** 2))


def chrosen_grad(x: np.ndarray) -> np.ndarray:
    r = x[:-1] - x[1:] ** 2
    g = np.zeros_like(x)
    g[:-1] += 8.0 * r
    g[1:] += -16.0 * r * x[1:] - 2.0 * (1.0 - x[1:])
    return g


def rosenbrock(x: np.ndarray) -> float:
    # chained form: sum_{i<n} 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2
    r = x[1:] - x[:-1] ** 2
    return float(np.sum(100.0 * r**2 + (1.0 - x[:-1]) ** 2))


def rosenbrock_grad(x: np.ndarray) -> np.ndarray:
    r = x[1:] - x[:-1] ** 2
    g = np.zeros_like(x)
    g[:-1] += -400.0 * x[:-1] * r - 2.0 * (1.0 - x[:-1])
    g[1:] += 200.0 * r
    return g


def sphere(x: np.ndarray) -> float:
    return float(np.dot(x, x))


def sphere_grad(x: np.ndarray) -> np.ndarray:
    return 2.0 * x


def power(x: np.ndarray) -> float:
    # sum_i (i x_i)^2
    i = np.arange(1, x.size + 1, dtype=float)
    return float(np.sum((i * x) ** 2))


def power_grad(x: np.ndarray) -> np.ndarray:
    i = np.arange(1, x.size + 1, dtype=float)
    return 2.0 * i**2 * x


def _sparsqur_index(n: int) -> np.ndarray:
    i1 = np.arange(1, n + 1)
    columns = [i1 - 1] + [(k * i1 - 1) % n for k in (2, 3, 5, 7, 11)]
    return np.stack(columns, axis=1)


def sparsqur(x: np.ndarray) -> float:
    # sum_i (i/2) q_i^2, q_i = 1/2 sum_{j in J_i} x_j^2 over six sparse indices
    idx = _sparsqur_index(x.size)
    q = 0.5 * np.sum(x[idx] ** 2, axis=1)
    weights = np.arange(1, x.size + 1, dtype=float) / 2.0
    return float(np.sum(weights * q**2))


def sparsqur_grad(x: np.ndarray) -> np.ndarray:
    idx = _sparsqur_index(x.size)
    q = 0.5 * np.sum(x[idx] ** 2, axis=1)
    w = np.arange(1, x.size + 1, dtype=float) * q
    g = np.zeros_like(x)
    np.add.at(g, idx.ravel(), (w[:, None] * x[idx]).ravel())
    return g


def nondia(x: np.ndarray) -> float:
    # (x_1 - 1)^2 + sum_{i>=2} 100 (x_1 - x_{i-1}^2)^2
    r = x[0] - x[:-1] ** 2
    return float((x[0] - 1.0) ** 2 + 100.0 * np.sum(r**2))


def nondia_grad(x: np.ndarray) -> np.ndarray:
    r = x[0] - x[:-1] ** 2
    g = np.zeros_like(x)
    g[:-1] += -400.0 * r * x[:-1]
    g[0] += 2.0 * (x[0] - 1.0) + 200.0 * np.sum(r)
    return g


def woods(x: np.ndarray) -> float:
    a, b, c, d = x.reshape(-1, 4).T
    return float(
        np.sum(
            100.0 * (b - a**2) ** 2
            + (1.0 - a) ** 2
            + 90.0 * (d - c**2) ** 2
            + (1.0 - c) ** 2
            + 10.1 * ((b - 1.0) ** 2 + (d - 1.0) ** 2)
            + 19.8 * (b - 1.0) * (d - 1.0)
        )
    )


def woods_grad(x: np.ndarray) -> np.ndarray:
    a, b, c, d = x.reshape(-1, 4).T
    g = np.empty((a.size, 4))
    g[:, 0] = -400.0 * a * (b - a**2) - 2.0 * (1.0 - a)
    g[:, 1] = 200.0 * (b - a**2) + 20.2 * (b - 1.0) + 19.8 * (d - 1.0)
    g[:, 2] = -360.0 * c * (d - c**2) - 2.0 * (1.0 - c)
    g[:, 3] = 180.0 * (d - c**2) + 20.2 * (d - 1.0) + 19.8 * (b - 1.0)
    return g.ravel()


def eg2(x: np.ndarray) -> float:
    # sum_{i<n} sin(x_1 + x_i^2 - 1) + sin(x_n^2) / 2
    u = x[0] + x[:-1] ** 2 - 1.0
    return float(np.sum(np.sin(u)) + 0.5 * np.sin(x[-1] ** 2))


def eg2_grad(x: np.ndarray) -> np.ndarray:
    c = np.cos(x[0] + x[:-1] ** 2 - 1.0)
    g = np.zeros_like(x)
    g[:-1] += 2.0 * c * x[:-1]
    g[0] += np.sum(c)
    g[-1] += np.cos(x[-1] ** 2) * x[-1]
    return g


def liarwhd(x: np.ndarray) -> float:
    # sum_i 4 (x_i^2 - x_1)^2 + (x_i - 1)^2
    r = x**2 - x[0]
    return float(np.sum(4.0 * r**2 + (x - 1.0) ** 2))


def liarwhd_grad(x: np.ndarray) -> np.ndarray:
    r = x**2 - x[0]
    g = 16.0 * r * x + 2.0 * (x - 1.0)
    g[0] -= 8.0 * np.sum(r)
    return g


def engval1(x: np.ndarray) -> float:
    # sum_{i<n} (x_i^2 + x_{i+1}^2)^2 - 4 x_i + 3
    t = x[:-1] ** 2 + x[1:] ** 2
    return float(np.sum(t**2 - 4.0 * x[:-1] + 3.0))


def engval1_grad(x: np.ndarray) -> np.ndarray:
    t = x[:-1] ** 2 + x[1:] ** 2
    g = np.zeros_like(x)
    g[:-1] += 4.0 * x[:-1] * t - 4.0
    g[1:] += 4.0 * x[1:] * t
    return g


def _brybnd_residual(x: np.ndarray) -> np.ndarray:
    # r_i = x_i (2 + 5 x_i^2) + 1 - sum_{j in J_i} x_j (1 + x_j),
    # J_i = {i-5, ..., i-1, i+1} clipped to [1, n]
    n = x.size
    b = x * (1.0 + x)
    cs = np.concatenate(([0.0], np.cumsum(b)))
    i = np.arange(n)
    lower = cs[i] - cs[np.maximum(i - 5, 0)]
    upper = np.zeros(n)
    upper[:-1] = b[1:]
    return x * (2.0 + 5.0 * x**2) + 1.0 - lower - upper


def brybnd(x: np.ndarray) -> float:
    r = _brybnd_residual(x)
    return float(np.dot(r, r))


def brybnd_grad(x: np.ndarray) -> np.ndarray:
    n = x.size
    r2 = 2.0 * _brybnd_residual(x)
    cr = np.concatenate(([0.0], np.cumsum(r2)))
    j = np.arange(n)
    coupled = cr[np.minimum(j + 6, n)] - cr[j + 1]
    coupled[1:] += r2[:-1]
    return r2 * (2.0 + 15.0 * x**2) - (1.0 + 2.0 * x) * coupled


def diagquad(x: np.ndarray) -> float:
    i = np.arange(1, x.size + 1, dtype=float)
    return float(0.5 * np.sum(i * x**2))


def diagquad_grad(x: np.ndarray) -> np.ndarray:
    return np.arange(1, x.size + 1, dtype=float) * x


def dqrtic(x: np.ndarray) -> float:
    i = np.arange(1, x.size + 1, dtype=float)
    return float(np.sum((x - i) ** 4))


def dqrtic_grad(x: np.ndarray) -> np.ndarray:
    i = np.arange(1, x.size + 1, dtype=float)
    return 4.0 * (x - i) ** 3


def _constant_start(value: float) -> Callable[[int], np.ndarray]:
    def start(n: int) -> np.ndarray:
        return np.full(n, value, dtype=float)

    return start


def _alternating_start(odd: float, even: float) -> Callable[[int], np.ndarray]:
    def start(n: int) -> np.ndarray:
        x0 = np.full(n, even, dtype=float)
        x0[::2] = odd
        return x0

    return start


def _woods_start(n: int) -> np.ndarray:
    return np.tile([-3.0, -1.0, -3.0, -1.0], n // 4)


FUNCTIONS: Dict[str, Tuple[Objective, Gradient, Callable[[int], np.ndarray]]] = {
    "arwhead": (arwhead, arwhead_grad, _constant_start(1.0)),
    "chrosen": (chrosen, chrosen_grad, _constant_start(-1.0)),
    "rosenbrock": (rosenbrock, rosenbrock_grad, _alternating_start(-1.2, 1.0)),
    "sphere": (sphere, sphere_grad, _constant_start(1.0)),
    "power": (power, power_grad, _constant_start(1.0)),
    "sparsqur": (sparsqur, sparsqur_grad, _constant_start(0.5)),
    "nondia": (nondia, nondia_grad, _constant_start(-1.0)),
    "woods": (woods, woods_grad, _woods_start),
    "eg2": (eg2, eg2_grad, _constant_start(0.0)),
    "liarwhd": (liarwhd, liarwhd_grad, _constant_start(4.0)),
    "engval1": (engval1, engval1_grad, _constant_start(2.0)),
    "brybnd": (brybnd, brybnd_grad, _constant_start(-1.0)),
    "diagquad": (diagquad, diagquad_grad, _constant_start(1.0)),
    "dqrtic": (dqrtic, dqrtic_grad, _constant_start(2.0)),
}
