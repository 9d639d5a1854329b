"""First-order expansions of ``u(x_i + h_i) - u(x_i)`` and their remainders.

Both steps return the remainder in the form that must be *added* to the
prediction, divided by ``h_i``::

    u(x_i + h_i) = u(x_i) + increment + h_i * remainder
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .functions import SmoothFunction, evaluate

__all__ = ["ExpansionResult", "taylor_step", "taylor_like_step", "trapezoid_weights"]

_EDGE_SLACK = 1e-12


@dataclass(frozen=True)
class ExpansionResult:
    increment: float
    remainder: float
    bound: float

    @property
    def contained(self) -> bool:
        return abs(self.remainder) <= self.bound + 1e-12


def _check_interval(x_i: float, h_i: float) -> None:
    if not h_i > 0.0:
        raise ValueError(f"h_i must be positive, got {h_i!r}")
    if x_i < -_EDGE_SLACK or x_i + h_i > 1.0 + _EDGE_SLACK:
        raise ValueError(f"[{x_i}, {x_i + h_i}] is not inside [0, 1]")


def taylor_step(f: SmoothFunction, x_i: float, h_i: float) -> ExpansionResult:
    """Classical step: predict with ``h_i * u'(x_i)``; bound ``h_i/2 * sup|u''|``."""
    _check_interval(x_i, h_i)
    slope = float(f.d1(x_i))
    secant = (float(f.value(x_i + h_i)) - float(f.value(x_i))) / h_i
    return ExpansionResult(
        increment=h_i * slope,
        remainder=secant - slope,
        bound=0.5 * h_i * f.sup_d2,
    )


def trapezoid_weights(n: int) -> np.ndarray:
    """Weights ``1/(2n), 1/n, ..., 1/n, 1/(2n)`` on the ``n + 1`` points."""
    w = np.full(n + 1, 1.0 / n)
    w[0] = w[-1] = 0.5 / n
    return w


def taylor_like_step(f: SmoothFunction, x_i: float, h_i: float, n: int) -> ExpansionResult:
    """Taylor-like step with ``n`` equal sub-panels.

    The derivative term is the composite trapezoid average of ``u'`` on
    ``x_i + k h_i / n``; the remainder is bounded by
    ``h_i / (8 n) * (M2 - m2)``.
    """
    _check_interval(x_i, h_i)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    pts = x_i + np.arange(n + 1, dtype=float) * (h_i / n)
    pts[-1] = x_i + h_i
    mean_slope = kernels.trapezoid_mean(evaluate(f.d1, pts))
    secant = (float(f.value(x_i + h_i)) - float(f.value(x_i))) / h_i
    return ExpansionResult(
        increment=h_i * mean_slope,
        remainder=secant - mean_slope,
        bound=h_i / (8.0 * n) * f.osc_d2,
    )
