"""Independent reference computations used by the tests.

Nothing here calls the analysis module: verdicts come from raw log-space
partial products, and constants come from mpmath.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath
import numpy as np

BRUTE_N = 100_000


def basel_minus_one(digits: int = 30) -> float:
    """sum_{n>=2} 1/n^2, the value of sum_n (1/(n+1))^2."""
    with mpmath.workdps(digits):
        return float(mpmath.zeta(2) - 1)


def cubic_roots(a: np.ndarray) -> list[complex]:
    """Eigenvalues of a 3x3 matrix from its characteristic polynomial."""
    tr = np.trace(a)
    m2 = 0.5 * (tr ** 2 - np.trace(a @ a))
    det = np.linalg.det(a)
    with mpmath.workdps(40):
        roots = mpmath.polyroots([1, -mpmath.mpc(tr), mpmath.mpc(m2), -mpmath.mpc(det)], maxsteps=200, extraprec=80)
    return [complex(r) for r in roots]


@lru_cache(maxsize=None)
def _log_weights(channel, n: int) -> tuple[np.ndarray, np.ndarray]:
    ch = channel.midpoint()
    fwd = np.array([math.log(ch.weight_at(j)) for j in range(n)])
    bwd = np.array([math.log(ch.weight_at(-j)) for j in range(1, n + 1)])
    return np.cumsum(fwd), np.cumsum(bwd)


def brute_force_verdict(channel, rho: float, n: int = BRUTE_N) -> str:
    """'In' or 'Out' from the first ``n`` squared norms on each side.

    A side counts as summable when its last squared norm is negligible
    (below 1e-15), and as divergent when a norm beyond n/2 stays >= 1e-3.
    Anything in between is reported as 'Unclear'.
    """
    fwd, bwd = _log_weights(channel, n)
    k = np.arange(1, n + 1)
    log_f = fwd - k * math.log(rho)
    log_b = k * math.log(rho) - bwd
    sides = []
    for lg in (log_f, log_b):
        if lg[-1] < math.log(1e-15) and np.max(lg[n // 2:]) < math.log(1e-15):
            sides.append("sum")
        elif np.min(lg[n // 2:]) >= math.log(1e-3) or lg[-1] > 0:
            sides.append("div")
        else:
            sides.append("unclear")
    if "div" in sides:
        return "Out"
    if sides == ["sum", "sum"]:
        return "In"
    return "Unclear"


def literal_product(values) -> float:
    return math.prod(values)
