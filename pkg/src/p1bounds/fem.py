"""P1 finite elements for ``-u'' + u = f`` on ]0, 1[ with ``u(0) = u(1) = 0``.

The bilinear form ``int u'v' + uv`` is the H^1 inner product, so the
discrete solution is the H^1-orthogonal projection of ``u`` onto the
P1 space and its H^1 error never exceeds that of the interpolant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .bounds import TAYLOR, TAYLOR_LIKE_ASYMPTOTIC, BoundMethod, interpolation_bound
from .functions import SmoothFunction, evaluate, preset
from .mesh import Mesh1D, uniform_mesh
from .norms import (
    DEFAULT_QUADRATURE,
    ApproximateBoundsError,
    PiecewiseLinear,
    QuadratureSpec,
    error_norm_1p,
    interpolate,
    quadrature_rule,
)

__all__ = [
    "BvpProblem",
    "FemSolution",
    "CeaConstant",
    "TridiagonalSystem",
    "CeaReport",
    "SavingsReport",
    "manufactured",
    "problem_preset",
    "PROBLEMS",
    "assemble",
    "solve",
    "fem_error",
    "cea_chain",
    "savings_experiment",
    "MAX_CELLS",
]

MAX_CELLS = 2 ** 14


@dataclass(frozen=True)
class BvpProblem:
    name: str
    f: Callable
    exact: Optional[SmoothFunction] = None

    def __post_init__(self) -> None:
        if self.exact is None:
            return
        u = self.exact
        if abs(float(u.value(0.0))) > 1e-12 or abs(float(u.value(1.0))) > 1e-12:
            raise ValueError(f"{self.name}: exact solution must vanish at 0 and 1")
        xs = np.linspace(0.0, 1.0, 101)
        resid = -evaluate(u.d2, xs) + evaluate(u.value, xs) - evaluate(self.f, xs)
        if np.max(np.abs(resid)) > 1e-10:
            raise ValueError(f"{self.name}: load does not match -u'' + u")


def manufactured(exact: SmoothFunction) -> BvpProblem:
    """Problem whose load is ``-u'' + u`` for the given exact solution."""
    return BvpProblem(exact.name, lambda x: -exact.d2(x) + exact.value(x), exact)


def _parabola() -> SmoothFunction:
    return SmoothFunction(
        "parabola",
        lambda x: x * (1.0 - x),
        lambda x: 1.0 - 2.0 * x,
        lambda x: -2.0 + 0.0 * x,
        -2.0, -2.0, 2.0,
    )


def _bubble() -> SmoothFunction:
    # x^2 (1 - x): u'' = 2 - 6x ranges over [-4, 2]
    return SmoothFunction(
        "bubble",
        lambda x: x * x * (1.0 - x),
        lambda x: 2.0 * x - 3.0 * x * x,
        lambda x: 2.0 - 6.0 * x,
        -4.0, 2.0, 4.0,
    )


def _zero() -> SmoothFunction:
    z = lambda x: 0.0 * x  # noqa: E731
    return SmoothFunction("zero", z, z, z, 0.0, 0.0, 0.0)


PROBLEMS: dict[str, Callable[[], BvpProblem]] = {
    "sin_pi": lambda: manufactured(preset("sin_pi")),
    "parabola": lambda: manufactured(_parabola()),
    "bubble": lambda: manufactured(_bubble()),
    "zero": lambda: manufactured(_zero()),
}


def problem_preset(name: str) -> BvpProblem:
    try:
        return PROBLEMS[name]()
    except KeyError:
        valid = ", ".join(sorted(PROBLEMS))
        raise KeyError(f"unknown problem {name!r}; valid problems: {valid}") from None


@dataclass(frozen=True)
class TridiagonalSystem:
    """Bands of the stiffness-plus-mass matrix over interior nodes."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    @property
    def size(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.lower, -1) + np.diag(self.upper, 1)


def assemble(mesh: Mesh1D) -> TridiagonalSystem:
    """Exact element integrals: stiffness ``1/h``, mass ``h/3`` and ``h/6``."""
    h = mesh.widths
    if mesh.num_cells < 2:
        empty = np.zeros(0)
        return TridiagonalSystem(empty, empty, empty)
    hl, hr = h[:-1], h[1:]
    diag = 1.0 / hl + 1.0 / hr + (hl + hr) / 3.0
    off = -1.0 / h[1:-1] + h[1:-1] / 6.0
    return TridiagonalSystem(off.copy(), diag, off)


@dataclass(frozen=True)
class FemSolution:
    mesh: Mesh1D
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coefficients, dtype=float)
        if c.shape != self.mesh.nodes.shape or c[0] != 0.0 or c[-1] != 0.0:
            raise ValueError("coefficients must cover every node and vanish at 0 and 1")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def as_piecewise(self) -> PiecewiseLinear:
        return PiecewiseLinear(self.mesh, self.coefficients)


def load_vector(f: Callable, mesh: Mesh1D, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> np.ndarray:
    """``int f * phi_j`` for every node ``j`` (boundary entries included)."""
    x, w, cells = quadrature_rule(mesh, quad)
    fx = evaluate(f, x)
    if not np.all(np.isfinite(fx)):
        raise FloatingPointError("load f is not finite at a quadrature point")
    t = (x - mesh.nodes[cells]) / mesh.widths[cells]
    # bincount sums in index order, so the reduction is reproducible
    size = mesh.nodes.size
    left = np.bincount(cells, weights=w * fx * (1.0 - t), minlength=size)
    right = np.bincount(cells + 1, weights=w * fx * t, minlength=size)
    return left + right


def solve(problem: BvpProblem, mesh: Mesh1D, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> FemSolution:
    coeffs = np.zeros(mesh.nodes.size)
    rhs = load_vector(problem.f, mesh, quad)
    system = assemble(mesh)
    if system.size:
        coeffs[1:-1] = kernels.thomas_solve(system.lower, system.diag, system.upper, rhs[1:-1])
    return FemSolution(mesh, coeffs)


def _require_exact(problem: BvpProblem) -> SmoothFunction:
    if problem.exact is None:
        raise ValueError(f"{problem.name}: no exact solution to measure the error against")
    return problem.exact


def fem_error(problem: BvpProblem, sol: FemSolution, p: int, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """``||u - u_h||_{1,p}`` against the exact solution."""
    return error_norm_1p(_require_exact(problem), sol.as_piecewise(), p, quad)


@dataclass(frozen=True)
class CeaConstant:
    """Multiplier of the quasi-optimality estimate.

    For p = 2 the bilinear form is the H^1 inner product and 1 is exact.
    Otherwise the value stands for ``1 + ||a|| / alpha_h``, which has to be
    supplied by the caller.
    """

    value: float = 1.0

    def __post_init__(self) -> None:
        if not self.value >= 1.0:
            raise ValueError(f"Cea constant must be >= 1, got {self.value!r}")

    def describe(self, p: int) -> str:
        if p == 2:
            return f"C = {self.value:g}"
        return f"C' = 1 + ||a||/alpha_h = {self.value:g} (user supplied)"


@dataclass
class CeaReport:
    problem: str
    num_cells: int
    h: float
    p: int
    method: BoundMethod
    fem_error: float
    interp_error: float
    bound: float
    cea: float
    galerkin_checked: bool
    galerkin_ok: bool
    interp_ok: bool

    @property
    def ok(self) -> bool:
        return self.interp_ok and (self.galerkin_ok or not self.galerkin_checked)


def cea_chain(
    problem: BvpProblem,
    mesh: Mesh1D,
    p: int,
    cea: CeaConstant,
    method: BoundMethod,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    tol: float = 1e-9,
) -> CeaReport:
    """FEM error, interpolation error and ``cea * bound`` on one mesh.

    The Galerkin inequality ``fem_error <= interp_error`` is only asserted
    for p = 2 with C = 1; the interpolation bound is always checked.
    """
    exact = _require_exact(problem)
    if not exact.exact_bounds:
        raise ApproximateBoundsError(f"{problem.name}: exact solution has sampled bounds")
    sol = solve(problem, mesh, quad)
    e_fem = fem_error(problem, sol, p, quad)
    e_int = error_norm_1p(exact, interpolate(exact, mesh), p, quad)
    rep = interpolation_bound(method, p, mesh.h, exact.sup_d2, exact.osc_d2)
    checked = p == 2 and cea.value == 1.0
    return CeaReport(
        problem=problem.name,
        num_cells=mesh.num_cells,
        h=mesh.h,
        p=p,
        method=method,
        fem_error=e_fem,
        interp_error=e_int,
        bound=cea.value * rep.bound_W1p,
        cea=cea.value,
        galerkin_checked=checked,
        galerkin_ok=e_fem <= cea.value * e_int + tol,
        interp_ok=e_int <= rep.bound_W1p * (1.0 + 1e-10) + 1e-13,
    )


@dataclass
class SavingsReport:
    p: int
    dim: int
    target_error: float
    cea: float
    cells_taylor: int
    cells_taylor_like: int
    h_ratio: float
    node_factor: float
    predicted_h_ratio: float
    predicted_node_factor: float
    saturated: bool
    measured_taylor: Optional[float] = None
    measured_taylor_like: Optional[float] = None
    notes: list[str] = field(default_factory=list)


def _coarsest_cells(method: BoundMethod, p: int, exact: SmoothFunction, cea: float, target: float):
    """Smallest uniform cell count whose bound is <= target, or None."""

    def fits(n: int) -> bool:
        rep = interpolation_bound(method, p, 1.0 / n, exact.sup_d2, exact.osc_d2)
        return cea * rep.bound_W1p <= target

    if fits(1):
        return 1
    if not fits(MAX_CELLS):
        return None
    lo, hi = 1, MAX_CELLS  # fits(lo) false, fits(hi) true
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fits(mid):
            hi = mid
        else:
            lo = mid
    return hi


def savings_experiment(
    problem: BvpProblem,
    p: int,
    target_error: float,
    dim: int,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    cea: CeaConstant = CeaConstant(),
    coarse: BoundMethod = TAYLOR_LIKE_ASYMPTOTIC,
    fine: BoundMethod = TAYLOR,
    measure: bool = True,
) -> SavingsReport:
    """Coarsest uniform meshes meeting ``target_error`` under each bound.

    Bisects over the cell count (up to ``MAX_CELLS``).  An unreachable
    target is reported with ``saturated=True`` rather than raised.
    """
    from .bounds import mesh_savings

    if not target_error > 0:
        raise ValueError("target_error must be positive")
    exact = _require_exact(problem)
    predicted = mesh_savings(p, coarse, fine, dim)
    n_fine = _coarsest_cells(fine, p, exact, cea.value, target_error)
    n_coarse = _coarsest_cells(coarse, p, exact, cea.value, target_error)
    notes = ["bound-driven mesh choice; h ratio prediction ignores (1 + h^p/p)^(1/p)"]
    saturated = n_fine is None or n_coarse is None
    if saturated:
        notes.append(f"target not reachable with {MAX_CELLS} cells")
        return SavingsReport(p, dim, target_error, cea.value,
                             n_fine or MAX_CELLS, n_coarse or MAX_CELLS,
                             math.nan, math.nan, predicted.h_ratio,
                             predicted.node_factor, True, notes=notes)
    h_ratio = n_fine / n_coarse
    report = SavingsReport(p, dim, target_error, cea.value, n_fine, n_coarse,
                           h_ratio, h_ratio ** dim, predicted.h_ratio,
                           predicted.node_factor, False, notes=notes)
    if measure:
        report.measured_taylor = fem_error(problem, solve(problem, uniform_mesh(n_fine), quad), p, quad)
        report.measured_taylor_like = fem_error(problem, solve(problem, uniform_mesh(n_coarse), quad), p, quad)
    return report
