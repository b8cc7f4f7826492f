# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Same signatures as ``_fallback``."""
import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, log
from scipy.linalg.cython_blas cimport zgemm

cnp.import_array()

BACKEND = "cython"


def hyp3f2_series(double a1, double a2, double a3, double b1, double b2,
                  double z, double rtol=1e-14, long max_terms=1000000):
    cdef double total = 1.0
    cdef double term = 1.0
    cdef long n
    for n in range(max_terms):
        term *= (a1 + n) * (a2 + n) * (a3 + n) / ((b1 + n) * (b2 + n) * (n + 1.0)) * z
        total += term
        if fabs(term) <= rtol * fabs(total):
            return total, n + 2
    raise ArithmeticError(f"3F2 series did not converge within {max_terms} terms")


def spectral_entropies(spectra, double neg_tol=1e-12):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] lam = np.array(
        spectra, dtype=np.float64, ndmin=2, copy=True, order="C")
    cdef Py_ssize_t rows = lam.shape[0], cols = lam.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s_vn = np.empty(rows)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s_lin = np.empty(rows)
    cdef double[:, ::1] view = lam
    cdef Py_ssize_t r, c
    cdef double total, x, h, p2
    for r in range(rows):
        total = 0.0
        for c in range(cols):
            x = view[r, c]
            if x < 0.0:
                if x < -neg_tol:
                    raise ValueError(f"eigenvalue {x:.3e} below clamp window -{neg_tol:g}")
                view[r, c] = 0.0
            else:
                total += x
        if total <= 0.0:
            raise ValueError("spectrum with zero total weight")
        h = 0.0
        p2 = 0.0
        for c in range(cols):
            x = view[r, c] / total
            if x > 0.0:
                h -= x * log(x)
                p2 += x * x
        s_vn[r] = h
        s_lin[r] = 1.0 - p2
    return s_vn, s_lin


def factored_trajectory(a0, coupling, u1, u2, long steps):
    # Row-major X is column-major X^T, so A -> u1 (C*A) u2^T becomes two
    # column-major products: T^T = u2 (C*A)^T, then out^T = T^T u1^T.
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] a = np.ascontiguousarray(a0, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] c = np.ascontiguousarray(coupling, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] w1 = np.ascontiguousarray(u1, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] w2t = np.ascontiguousarray(np.transpose(u2), dtype=np.complex128)
    cdef int n = a.shape[0], m = a.shape[1]
    if c.shape[0] != n or c.shape[1] != m:
        raise ValueError("coupling shape does not match amplitudes")
    if w1.shape[0] != n or w1.shape[1] != n or w2t.shape[0] != m or w2t.shape[1] != m:
        raise ValueError("single-top unitaries do not match amplitude shape")
    out_arr = np.empty((steps + 1, n, m), dtype=np.complex128)
    out_arr[0] = a
    cdef double complex[:, :, ::1] out = out_arr
    cdef double complex[:, ::1] cv = c
    cdef double complex[:, ::1] scratch = np.empty((n, m), dtype=np.complex128)
    cdef double complex[:, ::1] tmp = np.empty((n, m), dtype=np.complex128)
    cdef double complex one = 1.0, zero = 0.0
    cdef char trans = b'N'
    cdef long t
    cdef int i, k
    for t in range(1, steps + 1):
        for i in range(n):
            for k in range(m):
                scratch[i, k] = cv[i, k] * out[t - 1, i, k]
        zgemm(&trans, &trans, &m, &n, &m, &one, &w2t[0, 0], &m,
              &scratch[0, 0], &m, &zero, &tmp[0, 0], &m)
        zgemm(&trans, &trans, &m, &n, &n, &one, &tmp[0, 0], &m,
              &w1[0, 0], &n, &zero, &out[t, 0, 0], &m)
    return out_arr
