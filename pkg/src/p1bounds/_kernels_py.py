"""Pure-Python versions of the compiled kernels.

Same signatures and error behaviour as ``_kernels.pyx``.  Sums go through
:func:`math.fsum`, so results may differ from the compiled Neumaier
accumulation in the last ulp.
"""

from __future__ import annotations

import math

import numpy as np


def compensated_sum(values) -> float:
    return math.fsum(values)


def trapezoid_mean(values) -> float:
    n = len(values) - 1
    if n < 1:
        raise ValueError("need at least two samples")
    return (values[0] + values[n]) / (2.0 * n) + math.fsum(values[1:n]) / n


def weighted_abs_power_sum(diff, weights, p: int) -> float:
    if len(diff) != len(weights):
        raise ValueError("diff and weights differ in length")
    if p < 1:
        raise ValueError("p must be >= 1")
    return math.fsum(w * abs(d) ** p for d, w in zip(diff, weights))


def thomas_solve(lower, diag, upper, rhs) -> np.ndarray:
    m = len(diag)
    if len(rhs) != m or len(lower) != max(m - 1, 0) or len(upper) != max(m - 1, 0):
        raise ValueError("inconsistent tridiagonal band lengths")
    x = np.empty(m, dtype=float)
    if m == 0:
        return x
    cp = [0.0] * m
    piv = float(diag[0])
    if not piv > 0.0:
        raise np.linalg.LinAlgError("non-positive pivot at row 0")
    cp[0] = upper[0] / piv if m > 1 else 0.0
    x[0] = rhs[0] / piv
    for i in range(1, m):
        piv = diag[i] - lower[i - 1] * cp[i - 1]
        if not piv > 0.0:
            raise np.linalg.LinAlgError(f"non-positive pivot at row {i}")
        cp[i] = upper[i] / piv if i < m - 1 else 0.0
        x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / piv
    for i in range(m - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return x
