# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: left sparse matvec and the inner power iteration.

Mirrors the contracts of ``_purekernel``; selected at import time by
``_backend``.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs

COMPILED = True


cdef void _scatter(Py_ssize_t n, const long long[::1] indptr,
                   const long long[::1] indices, const double[::1] p,
                   const double[::1] v, double[::1] out) noexcept nogil:
    cdef Py_ssize_t i, k
    cdef double vi
    for i in range(n):
        out[i] = 0.0
    for i in range(n):
        vi = v[i]
        if vi == 0.0:
            continue
        for k in range(indptr[i], indptr[i + 1]):
            out[indices[k]] += vi * p[k]


def left_matvec(n, indptr, indices, p, v):
    """y = v @ P for the row-stochastic CSR matrix P = (p, indices, indptr)."""
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n)
    _scatter(n, indptr, indices, p, v, out)
    return out


def power_iterate(Py_ssize_t n, const long long[::1] indptr,
                  const long long[::1] indices, const double[::1] p,
                  double gamma, teleport, v0, double tol, long max_iter,
                  bint lazy):
    """Iterate v <- v @ M (or the lazy half-step) until ||vM - v||_1 <= tol.

    M = gamma * P + (1 - gamma) * 1 teleport^T.  Returns (v, iterations,
    converged); v is renormalized to the simplex after every step.
    """
    cdef cnp.ndarray[double, ndim=1] v = np.array(v0, dtype=float)
    cdef cnp.ndarray[double, ndim=1] y = np.empty(n)
    cdef double[::1] vv = v
    cdef double[::1] yy = y
    cdef double[::1] tele
    cdef bint damped = gamma < 1.0
    cdef double res, s, one_minus_gamma = 1.0 - gamma
    cdef Py_ssize_t i
    cdef long it
    if damped:
        tele = np.ascontiguousarray(teleport, dtype=float)
    else:
        tele = v  # unused
    for it in range(1, max_iter + 1):
        with nogil:
            _scatter(n, indptr, indices, p, vv, yy)
            res = 0.0
            s = 0.0
            for i in range(n):
                if damped:
                    yy[i] = gamma * yy[i] + one_minus_gamma * tele[i]
                res += fabs(yy[i] - vv[i])
                if lazy:
                    vv[i] = 0.5 * (vv[i] + yy[i])
                else:
                    vv[i] = yy[i]
                s += vv[i]
            for i in range(n):
                vv[i] /= s
        if res <= tol:
            return v, it, True
    return v, max_iter, False
