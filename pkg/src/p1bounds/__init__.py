"""Verification tools for P1 interpolation and finite-element error bounds in W^{1,p}(0, 1)."""

from .bounds import (
    MEAN_VALUE,
    TAYLOR,
    TAYLOR_LIKE_ASYMPTOTIC,
    BoundMethod,
    BoundReport,
    NormOrder,
    asymptotic_gap,
    constant,
    interpolation_bound,
    lemma21_cell_bound,
    mesh_savings,
    parse_method,
    power_sum,
    power_sum_pascal,
    star_sum,
    taylor_like,
)
from .expansion import ExpansionResult, taylor_like_step, taylor_step
from .fem import BvpProblem, CeaConstant, assemble, cea_chain, fem_error, savings_experiment, solve
from .functions import SmoothFunction, estimate_bounds, preset
from .kernels import BACKEND
from .mesh import Mesh1D, perturbed_mesh, subdivision_points, uniform_mesh
from .norms import (
    PiecewiseLinear,
    QuadratureSpec,
    error_norm_0p,
    error_norm_1p,
    error_norm_d1_0p,
    interpolate,
    verify_bound,
)

__version__ = "0.1.0"
