"""C^2 test functions on [0, 1] with analytic derivatives and u'' bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "SmoothFunction",
    "PRESETS",
    "preset",
    "estimate_bounds",
    "from_callables",
]

RealFn = Callable[[float], float]


@dataclass(frozen=True)
class SmoothFunction:
    """A function together with u', u'' and bounds m2 <= u'' <= M2.

    ``exact_bounds`` is False when the bounds came from sampling; bound
    verification refuses such functions.  Handles accept floats or numpy
    arrays and must be pure.
    """

    name: str
    value: RealFn
    d1: RealFn
    d2: RealFn
    m2: float
    M2: float
    sup_d2: float
    exact_bounds: bool = True

    def __post_init__(self) -> None:
        if not self.m2 <= self.M2:
            raise ValueError(f"m2={self.m2} exceeds M2={self.M2}")
        if self.sup_d2 < 0:
            raise ValueError("sup_d2 must be nonnegative")

    @property
    def osc_d2(self) -> float:
        """Oscillation M2 - m2 of the second derivative."""
        return self.M2 - self.m2

    def scaled(self, factor: float) -> "SmoothFunction":
        lo, hi = sorted((factor * self.m2, factor * self.M2))
        return SmoothFunction(
            name=f"{factor:g}*{self.name}",
            value=lambda x: factor * self.value(x),
            d1=lambda x: factor * self.d1(x),
            d2=lambda x: factor * self.d2(x),
            m2=lo,
            M2=hi,
            sup_d2=abs(factor) * self.sup_d2,
            exact_bounds=self.exact_bounds,
        )


def _affine() -> SmoothFunction:
    return SmoothFunction(
        "affine",
        lambda x: 0.75 * x - 0.25,
        lambda x: 0.75 + 0.0 * x,
        lambda x: 0.0 * x,
        0.0, 0.0, 0.0,
    )


def _quadratic() -> SmoothFunction:
    return SmoothFunction(
        "quadratic",
        lambda x: x * x,
        lambda x: 2.0 * x,
        lambda x: 2.0 + 0.0 * x,
        2.0, 2.0, 2.0,
    )


def _cubic() -> SmoothFunction:
    return SmoothFunction(
        "cubic",
        lambda x: x ** 3,
        lambda x: 3.0 * x ** 2,
        lambda x: 6.0 * x,
        0.0, 6.0, 6.0,
    )


def _sin_pi() -> SmoothFunction:
    pi = math.pi
    return SmoothFunction(
        "sin_pi",
        lambda x: np.sin(pi * x),
        lambda x: pi * np.cos(pi * x),
        lambda x: -pi * pi * np.sin(pi * x),
        -pi * pi, 0.0, pi * pi,
    )


def _expx() -> SmoothFunction:
    e = math.e
    return SmoothFunction("expx", np.exp, np.exp, np.exp, 1.0, e, e)


def _gauss_bump() -> SmoothFunction:
    # u = exp(-25 t^2), t = x - 1/2; u'' = (2500 t^2 - 50) u.
    # On |t| <= 1/2: min -50 at t = 0; max 100 exp(-3/2) at t^2 = 3/50
    # (interior critical point of u''); endpoint value 575 exp(-25/4) is smaller.
    def value(x):
        t = x - 0.5
        return np.exp(-25.0 * t * t)

    def d1(x):
        t = x - 0.5
        return -50.0 * t * np.exp(-25.0 * t * t)

    def d2(x):
        t = x - 0.5
        return (2500.0 * t * t - 50.0) * np.exp(-25.0 * t * t)

    hi = 100.0 * math.exp(-1.5)
    return SmoothFunction("gauss_bump", value, d1, d2, -50.0, hi, 50.0)


PRESETS: dict[str, Callable[[], SmoothFunction]] = {
    "quadratic": _quadratic,
    "cubic": _cubic,
    "sin_pi": _sin_pi,
    "expx": _expx,
    "gauss_bump": _gauss_bump,
    "affine": _affine,
}


def preset(name: str) -> SmoothFunction:
    """Look up a preset by name."""
    try:
        return PRESETS[name]()
    except KeyError:
        valid = ", ".join(sorted(PRESETS))
        raise KeyError(f"unknown function {name!r}; valid presets: {valid}") from None


def estimate_bounds(value_d2: RealFn, samples: int) -> tuple[float, float, float]:
    """Sampled (min, max, max-abs) of ``value_d2`` on a uniform grid.

    The grid includes both endpoints.  Interior extrema between grid
    points are missed, so callers must treat the result as approximate.
    """
    if samples < 2:
        raise ValueError("samples must be >= 2")
    xs = np.linspace(0.0, 1.0, samples)
    try:
        vals = np.array([float(value_d2(float(x))) for x in xs])
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        raise FloatingPointError(f"second derivative failed on the grid: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("second derivative is not finite on the grid")
    lo, hi = float(vals.min()), float(vals.max())
    return lo, hi, max(abs(lo), abs(hi))


def from_callables(
    name: str,
    value: RealFn,
    d1: RealFn,
    d2: RealFn,
    bounds: tuple[float, float, float] | None = None,
    samples: int = 1001,
) -> SmoothFunction:
    """Wrap user handles; without ``bounds`` they are estimated and flagged."""
    if bounds is None:
        m2, M2, sup = estimate_bounds(d2, samples)
        return SmoothFunction(name, value, d1, d2, m2, M2, sup, exact_bounds=False)
    m2, M2, sup = bounds
    return SmoothFunction(name, value, d1, d2, m2, M2, sup)


def evaluate(fn: RealFn, xs: np.ndarray) -> np.ndarray:
    """Apply a handle to an array, falling back to a scalar loop."""
    xs = np.asarray(xs, dtype=float)
    try:
        out = np.asarray(fn(xs), dtype=float)
    except TypeError:
        out = None
    if out is None or out.shape != xs.shape:
        out = np.array([float(fn(float(x))) for x in xs.ravel()]).reshape(xs.shape)
    return out
