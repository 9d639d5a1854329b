import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from p1bounds import kernels
from p1bounds.kernels import backend_module

try:
    backend_module("cython")
    BACKENDS = ["python", "cython"]
except ImportError:  # extension not built
    BACKENDS = ["python"]

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@pytest.fixture(params=BACKENDS)
def impl(request):
    return backend_module(request.param)


def spd_tridiagonal(rng, m):
    off = rng.uniform(-1.0, 1.0, m - 1) if m > 1 else np.zeros(0)
    diag = rng.uniform(0.1, 1.0, m)
    diag[:-1] += np.abs(off)
    diag[1:] += np.abs(off)
    return off, diag


@pytest.mark.parametrize("m", [1, 2, 3, 10, 257])
def test_thomas_against_dense(impl, m):
    rng = np.random.default_rng(m)
    off, diag = spd_tridiagonal(rng, m)
    rhs = rng.standard_normal(m)
    x = impl.thomas_solve(off, diag, off, rhs)
    dense = np.diag(diag) + np.diag(off, -1) + np.diag(off, 1)
    assert np.allclose(x, np.linalg.solve(dense, rhs), rtol=1e-12, atol=1e-12)


def test_thomas_empty(impl):
    e = np.zeros(0)
    assert impl.thomas_solve(e, e, e, e).size == 0


def test_thomas_rejects_indefinite(impl):
    diag = np.array([1.0, 1.0])
    off = np.array([2.0])
    with pytest.raises(np.linalg.LinAlgError):
        impl.thomas_solve(off, diag, off, np.ones(2))


def test_thomas_band_lengths(impl):
    with pytest.raises(ValueError):
        impl.thomas_solve(np.zeros(3), np.ones(3), np.zeros(2), np.ones(3))


def test_compensated_sum_cancellation(impl):
    vals = np.array([1e16, 1.0, -1e16, 1.0])
    assert impl.compensated_sum(vals) == 2.0
    assert impl.compensated_sum(np.zeros(0)) == 0.0


def test_trapezoid_mean(impl):
    assert impl.trapezoid_mean(np.array([0.0, 3.0])) == 1.5
    assert impl.trapezoid_mean(np.array([0.0, 0.75, 3.0])) == 1.125
    with pytest.raises(ValueError):
        impl.trapezoid_mean(np.array([1.0]))


def test_weighted_power_sum(impl):
    d = np.array([-2.0, 1.0, 0.5])
    w = np.array([0.5, 1.0, 4.0])
    assert impl.weighted_abs_power_sum(d, w, 3) == pytest.approx(0.5 * 8 + 1 + 4 * 0.125, rel=1e-15)
    with pytest.raises(ValueError):
        impl.weighted_abs_power_sum(d, w[:2], 2)
    with pytest.raises(ValueError):
        impl.weighted_abs_power_sum(d, w, 0)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.integers(2, 300), elements=finite),
       st.integers(1, 8))
def test_backends_agree(values, p):
    py, cy = backend_module("python"), backend_module("cython")
    scale = np.sum(np.abs(values)) + 1e-300
    assert abs(py.compensated_sum(values) - cy.compensated_sum(values)) <= 4e-16 * scale
    assert abs(py.trapezoid_mean(values) - cy.trapezoid_mean(values)) <= 4e-16 * scale
    w = np.abs(values[::-1]) / (scale) + 0.1
    small = values / (np.max(np.abs(values)) + 1.0)
    a, b = py.weighted_abs_power_sum(small, w, p), cy.weighted_abs_power_sum(small, w, p)
    assert a == pytest.approx(b, rel=1e-13, abs=1e-300)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
def test_backends_agree_on_thomas():
    rng = np.random.default_rng(7)
    off, diag = spd_tridiagonal(rng, 500)
    rhs = rng.standard_normal(500)
    a = backend_module("python").thomas_solve(off, diag, off, rhs)
    b = backend_module("cython").thomas_solve(off, diag, off, rhs)
    assert np.array_equal(a, b)  # identical operation order


def test_wrappers_accept_lists():
    assert kernels.compensated_sum([0.1] * 10) == pytest.approx(1.0, rel=1e-16)
    assert kernels.trapezoid_mean([1, 1, 1]) == 1.0


def test_force_python_backend_by_env():
    env = dict(os.environ, P1BOUNDS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import p1bounds; print(p1bounds.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend_name():
    with pytest.raises(ValueError):
        backend_module("fortran")
