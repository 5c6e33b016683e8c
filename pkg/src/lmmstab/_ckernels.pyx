# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in lmmstab._pykernels."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


cdef Py_ssize_t _ncols(shape):
    cdef Py_ssize_t m = 1
    for s in shape[1:]:
        m *= s
    return m


cdef void _matvec_cols(const double[::1] c, const double[:, ::1] x, double[:, ::1] y) noexcept nogil:
    # diagonal by diagonal over the flat row-major buffer, the same order as
    # the numpy fallback, so results agree bit for bit
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1], K = c.shape[0] - 1
    cdef Py_ssize_t p, j, total = n * m, shift
    cdef const double* xp = &x[0, 0]
    cdef double* yp = &y[0, 0]
    cdef double cj, c0 = c[0]
    if total == 0:
        return
    for p in range(total):
        yp[p] = c0 * xp[p]
    for j in range(1, K + 1):
        if j >= n:
            break
        cj = c[j]
        if cj != 0.0:
            shift = j * m
            for p in range(shift, total):
                yp[p] += cj * xp[p - shift]


def banded_matvec(coeffs, x):
    cdef const double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    arr = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[:, ::1] xv = arr.reshape(arr.shape[0], _ncols(arr.shape))
    out = np.empty((xv.shape[0], xv.shape[1]), dtype=np.float64)
    cdef double[:, ::1] yv = out
    with nogil:
        _matvec_cols(c, xv, yv)
    return out.reshape(arr.shape)


cdef void _solve_cols(const double[::1] c, double[:, ::1] x, Py_ssize_t start) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1], K = c.shape[0] - 1
    cdef Py_ssize_t i, j, col, jmax
    cdef double cj, c0 = c[0]
    for i in range(start, n):
        jmax = K if K < i else i
        for j in range(1, jmax + 1):
            cj = c[j]
            if cj != 0.0:
                for col in range(m):
                    x[i, col] -= cj * x[i - j, col]
        for col in range(m):
            x[i, col] = x[i, col] / c0


def banded_solve(coeffs, y, Py_ssize_t start=0):
    cdef const double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    arr = np.array(y, dtype=np.float64, order="C", copy=True)
    shape = arr.shape
    cdef double[:, ::1] xv = arr.reshape(shape[0], _ncols(shape))
    with nogil:
        _solve_cols(c, xv, start)
    return arr


def max_abs_prefix_sum(v):
    cdef const double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t i, n = vv.shape[0]
    cdef double s = 0.0, best = 0.0
    with nogil:
        for i in range(n):
            s += vv[i]
            if fabs(s) > best:
                best = fabs(s)
    return best
