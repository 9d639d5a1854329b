"""Backend selection for the numerical inner loops.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``P1BOUNDS_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the pure-Python module is used.  ``BACKEND`` names the
active choice.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

_force_py = os.environ.get("P1BOUNDS_PURE_PYTHON", "") not in ("", "0")

if _force_py:
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def _f64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def compensated_sum(values) -> float:
    """Sum with error compensation, in input order."""
    return float(_impl.compensated_sum(_f64(values)))


def trapezoid_mean(values) -> float:
    """Composite trapezoid average ``(v_0 + v_n)/(2n) + sum(v_1..v_{n-1})/n``."""
    return float(_impl.trapezoid_mean(_f64(values)))


def weighted_abs_power_sum(diff, weights, p: int) -> float:
    """``sum(w_j * |d_j|**p)``, accumulated in order with compensation."""
    return float(_impl.weighted_abs_power_sum(_f64(diff), _f64(weights), int(p)))


def thomas_solve(lower, diag, upper, rhs) -> np.ndarray:
    """Solve a symmetric positive-definite tridiagonal system without pivoting.

    ``lower`` and ``upper`` hold the off-diagonals (length ``m - 1``).
    Raises :class:`numpy.linalg.LinAlgError` on a non-positive pivot.
    """
    return np.asarray(_impl.thomas_solve(_f64(lower), _f64(diag), _f64(upper), _f64(rhs)))


def backend_module(name: str):
    """Return the kernel module for ``"python"`` or ``"cython"`` (tests, benchmarks)."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
