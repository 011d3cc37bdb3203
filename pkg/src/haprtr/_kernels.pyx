# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled objective kernels.

The two matrix-vector products per kernel go through BLAS dgemv (the same
BLAS NumPy uses); the elementwise smoothing math in between is fused into
single C passes, so each kernel allocates only its outputs.  Signature
compatible with ``_kernels_py``; ``haprtr.kernels`` picks one of the two
at import time.  Needs SciPy for the BLAS bindings.
"""

from libc.math cimport sqrt

from scipy.linalg.cython_blas cimport dgemv

import numpy as np


cdef void _matvec(const double[:, ::1] A, const double* x, double* out) noexcept nogil:
    # out = A @ x; row-major A is its own transpose in BLAS column-major terms
    cdef int m = <int>A.shape[0], n = <int>A.shape[1], one = 1
    cdef double alpha = 1.0, beta = 0.0
    cdef char trans = b'T'
    dgemv(&trans, &n, &m, &alpha, <double*><void*>&A[0, 0], &n,
          <double*><void*>x, &one, &beta, out, &one)


cdef void _rmatvec_scaled(const double[:, ::1] A, const double* w, double alpha,
                          double* out) noexcept nogil:
    # out = alpha * (A.T @ w)
    cdef int m = <int>A.shape[0], n = <int>A.shape[1], one = 1
    cdef double beta = 0.0
    cdef char trans = b'N'
    dgemv(&trans, &n, &m, &alpha, <double*><void*>&A[0, 0], &n,
          <double*><void*>w, &one, &beta, out, &one)


def residuals(const double[:, ::1] A, const double[::1] x):
    r_arr = np.empty(A.shape[0], dtype=np.float64)
    cdef double[::1] r = r_arr
    _matvec(A, &x[0], &r[0])
    return r_arr


def cost(const double[:, ::1] A, const double[::1] x, double eps):
    # compensated summation: solver acceptance tests compare cost values
    # whose true differences sit near rounding scale
    cdef Py_ssize_t m = A.shape[0]
    cdef Py_ssize_t i
    cdef double f = 0.0, comp = 0.0, term, bumped
    r_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] r = r_arr
    _matvec(A, &x[0], &r[0])
    for i in range(m):
        term = -sqrt(r[i] * r[i] + eps) - comp
        bumped = f + term
        comp = (bumped - f) - term
        f = bumped
    return f, r_arr


def cost_grad(const double[:, ::1] A, const double[::1] x, double eps):
    cdef Py_ssize_t m = A.shape[0], n = A.shape[1]
    cdef Py_ssize_t i
    cdef double s, f = 0.0, comp = 0.0, term, bumped
    r_arr = np.empty(m, dtype=np.float64)
    g_arr = np.empty(n, dtype=np.float64)
    w_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] r = r_arr
    cdef double[::1] g = g_arr
    cdef double[::1] w = w_arr
    _matvec(A, &x[0], &r[0])
    for i in range(m):
        s = sqrt(r[i] * r[i] + eps)
        w[i] = r[i] / s
        term = -s - comp
        bumped = f + term
        comp = (bumped - f) - term
        f = bumped
    _rmatvec_scaled(A, &w[0], -1.0, &g[0])
    return f, r_arr, g_arr


def hess_apply(const double[:, ::1] A, const double[::1] r, const double[::1] xi, double eps):
    cdef Py_ssize_t m = A.shape[0], n = A.shape[1]
    cdef Py_ssize_t i
    cdef double s
    w_arr = np.empty(m, dtype=np.float64)
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] w = w_arr
    cdef double[::1] out = out_arr
    _matvec(A, &xi[0], &w[0])
    for i in range(m):
        s = r[i] * r[i] + eps
        w[i] = eps * w[i] / (s * sqrt(s))
    _rmatvec_scaled(A, &w[0], -1.0, &out[0])
    return out_arr
