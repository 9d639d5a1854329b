"""P1 interpolation and quadrature-based L^p / W^{1,p} error norms."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import kernels
from .bounds import BoundMethod, BoundReport, interpolation_bound
from .functions import SmoothFunction, evaluate
from .mesh import Mesh1D

__all__ = [
    "PiecewiseLinear",
    "QuadratureSpec",
    "DEFAULT_QUADRATURE",
    "ApproximateBoundsError",
    "interpolate",
    "quadrature_rule",
    "lp_integral",
    "cell_lp_integral",
    "error_norm_0p",
    "error_norm_d1_0p",
    "error_norm_1p",
    "verify_bound",
]


class ApproximateBoundsError(ValueError):
    """Raised when a verification is asked of a function with sampled bounds."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre: ``panels_per_cell`` equal panels per cell,
    ``points_per_panel`` nodes on each."""

    points_per_panel: int = 8
    panels_per_cell: int = 16

    def __post_init__(self) -> None:
        if self.points_per_panel < 2:
            raise ValueError("points_per_panel must be >= 2")
        if self.panels_per_cell < 1:
            raise ValueError("panels_per_cell must be >= 1")

    def refined(self) -> "QuadratureSpec":
        return QuadratureSpec(self.points_per_panel, 2 * self.panels_per_cell)


DEFAULT_QUADRATURE = QuadratureSpec()


@lru_cache(maxsize=None)
def _reference_rule(points: int, panels: int) -> tuple[np.ndarray, np.ndarray]:
    # nodes/weights of the composite rule on [0, 1]
    g, w = np.polynomial.legendre.leggauss(points)
    left = np.arange(panels, dtype=float) / panels
    x = (left[:, None] + (g[None, :] + 1.0) / (2.0 * panels)).ravel()
    wt = np.tile(w / (2.0 * panels), panels)
    x.setflags(write=False)
    wt.setflags(write=False)
    return x, wt


def quadrature_rule(mesh: Mesh1D, quad: QuadratureSpec = DEFAULT_QUADRATURE):
    """Points, weights and owning cell index for the whole mesh, cell by cell."""
    ref_x, ref_w = _reference_rule(quad.points_per_panel, quad.panels_per_cell)
    a = mesh.nodes[:-1]
    h = mesh.widths
    x = (a[:, None] + h[:, None] * ref_x[None, :]).ravel()
    w = (h[:, None] * ref_w[None, :]).ravel()
    cells = np.repeat(np.arange(mesh.num_cells), ref_x.size)
    return x, w, cells


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-affine function given by its nodal values."""

    mesh: Mesh1D
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=float)
        if vals.shape != self.mesh.nodes.shape:
            raise ValueError("need exactly one value per mesh node")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / self.mesh.widths

    def _cells(self, x: np.ndarray) -> np.ndarray:
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise ValueError("evaluation point outside [0, 1]")
        idx = np.searchsorted(self.mesh.nodes, x, side="left") - 1
        return np.clip(idx, 0, self.mesh.num_cells - 1)

    def on_cells(self, x: np.ndarray, cells: np.ndarray) -> np.ndarray:
        """Values at ``x`` when the owning cells are already known."""
        return self.values[cells] + self.slopes[cells] * (x - self.mesh.nodes[cells])

    def eval(self, x):
        xs = np.asarray(x, dtype=float)
        cells = self._cells(xs)
        out = self.on_cells(xs, cells)
        # exact nodal values, independent of rounding in the affine formula
        hit = self.mesh.nodes[cells + 1] == xs
        out = np.where(hit, self.values[cells + 1], out)
        hit = self.mesh.nodes[cells] == xs
        out = np.where(hit, self.values[cells], out)
        return float(out) if np.ndim(x) == 0 else out

    def eval_d1(self, x):
        """Cell slope; at an interior node the slope of the left cell."""
        xs = np.asarray(x, dtype=float)
        out = self.slopes[self._cells(xs)]
        return float(out) if np.ndim(x) == 0 else out


def interpolate(f: SmoothFunction, mesh: Mesh1D) -> PiecewiseLinear:
    return PiecewiseLinear(mesh, evaluate(f.value, mesh.nodes))


def lp_integral(
    g: Callable[[np.ndarray, np.ndarray], np.ndarray],
    mesh: Mesh1D,
    p: int,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """``int_0^1 |g|^p``; ``g`` receives the points and their cell indices."""
    x, w, cells = quadrature_rule(mesh, quad)
    return kernels.weighted_abs_power_sum(g(x, cells), w, p)


def cell_lp_integral(
    g: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    p: int,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """``int_a^b |g|^p`` with the composite rule on a single interval."""
    ref_x, ref_w = _reference_rule(quad.points_per_panel, quad.panels_per_cell)
    h = b - a
    return kernels.weighted_abs_power_sum(g(a + h * ref_x), h * ref_w, p)


def _power_integrals(f: SmoothFunction, pl: PiecewiseLinear, p: int, quad: QuadratureSpec):
    x, w, cells = quadrature_rule(pl.mesh, quad)
    e0 = evaluate(f.value, x) - pl.on_cells(x, cells)
    e1 = evaluate(f.d1, x) - pl.slopes[cells]
    return kernels.weighted_abs_power_sum(e0, w, p), kernels.weighted_abs_power_sum(e1, w, p)


def _check_p(p: int) -> None:
    if int(p) != p or p < 2:
        raise ValueError(f"p must be an integer >= 2, got {p!r}")


def error_norm_0p(f, pl, p, quad=DEFAULT_QUADRATURE) -> float:
    """``||u - u_I||_{0,p}``."""
    _check_p(p)
    return _power_integrals(f, pl, p, quad)[0] ** (1.0 / p)


def error_norm_d1_0p(f, pl, p, quad=DEFAULT_QUADRATURE) -> float:
    """``||u' - u_I'||_{0,p}``."""
    _check_p(p)
    return _power_integrals(f, pl, p, quad)[1] ** (1.0 / p)


def error_norm_1p(f, pl, p, quad=DEFAULT_QUADRATURE) -> float:
    """``||u - u_I||_{1,p} = (||e||_{0,p}^p + ||e'||_{0,p}^p)^(1/p)``."""
    _check_p(p)
    i0, i1 = _power_integrals(f, pl, p, quad)
    return (i0 + i1) ** (1.0 / p)


def verify_bound(
    f: SmoothFunction,
    mesh: Mesh1D,
    p: int,
    method: BoundMethod,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> BoundReport:
    """Measure ``||u - u_I||_{1,p}`` and set it against the a-priori bound."""
    if not f.exact_bounds:
        raise ApproximateBoundsError(
            f"{f.name}: bound verification needs exact m2/M2/sup|u''|, not sampled ones"
        )
    report = interpolation_bound(method, p, mesh.h, f.sup_d2, f.osc_d2)
    report.measured_error = error_norm_1p(f, interpolate(f, mesh), p, quad)
    return report
