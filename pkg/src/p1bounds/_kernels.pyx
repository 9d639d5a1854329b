# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; see ``_kernels_py`` for the reference versions."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


cdef inline double _ipow(double x, int p) nogil:
    cdef double r = 1.0
    while p > 0:
        if p & 1:
            r *= x
        x *= x
        p >>= 1
    return r


def compensated_sum(const double[::1] values):
    cdef Py_ssize_t i, m = values.shape[0]
    cdef double s = 0.0, c = 0.0, t, v
    for i in range(m):
        v = values[i]
        t = s + v
        if fabs(s) >= fabs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def trapezoid_mean(const double[::1] values):
    cdef Py_ssize_t i, m = values.shape[0]
    if m < 2:
        raise ValueError("need at least two samples")
    cdef Py_ssize_t n = m - 1
    cdef double s = 0.0, c = 0.0, t, v
    for i in range(1, n):
        v = values[i]
        t = s + v
        if fabs(s) >= fabs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return (values[0] + values[n]) / (2.0 * n) + (s + c) / n


def weighted_abs_power_sum(const double[::1] diff, const double[::1] weights, int p):
    cdef Py_ssize_t i, m = diff.shape[0]
    if weights.shape[0] != m:
        raise ValueError("diff and weights differ in length")
    if p < 1:
        raise ValueError("p must be >= 1")
    cdef double s = 0.0, c = 0.0, t, v
    for i in range(m):
        v = weights[i] * _ipow(fabs(diff[i]), p)
        t = s + v
        if fabs(s) >= fabs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def thomas_solve(const double[::1] lower, const double[::1] diag,
                 const double[::1] upper, const double[::1] rhs):
    cdef Py_ssize_t i, m = diag.shape[0]
    if rhs.shape[0] != m or lower.shape[0] != max(m - 1, 0) or upper.shape[0] != max(m - 1, 0):
        raise ValueError("inconsistent tridiagonal band lengths")
    out = np.empty(m, dtype=np.float64)
    if m == 0:
        return out
    cdef double[::1] x = out
    cdef double[::1] cp = np.empty(m, dtype=np.float64)
    cdef double piv
    piv = diag[0]
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
    return out
