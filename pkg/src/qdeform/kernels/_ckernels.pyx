# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot loops; same contracts as _pykernels."""

import numpy as np
from libc.math cimport sqrt, fabs

cdef double _TINY = 1e-300


def recurrence_table(x, a, b, int nmax):
    cdef double complex[::1] xs = np.ascontiguousarray(np.asarray(x, dtype=complex).ravel())
    cdef double[::1] av = np.ascontiguousarray(a, dtype=float)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=float)
    cdef Py_ssize_t m = xs.shape[0]
    out_arr = np.empty((m, nmax + 1), dtype=complex)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, k
    cdef double complex prev, cur, nxt, xi
    for i in range(m):
        xi = xs[i]
        prev = 0
        cur = 1
        out[i, 0] = cur
        for k in range(nmax):
            nxt = av[k] * xi * cur - bv[k] * prev
            prev = cur
            cur = nxt
            out[i, k + 1] = cur
    return out_arr


cdef Py_ssize_t _count_below(double x, double[::1] off) nogil:
    cdef double d = -x
    cdef Py_ssize_t count = 1 if d < 0 else 0
    cdef Py_ssize_t i
    cdef double e
    for i in range(off.shape[0]):
        if d == 0:
            d = -_TINY
        e = off[i]
        d = -x - e * (e / d)
        if d < 0:
            count += 1
    return count


def zero_diagonal_jacobi_eigvals(off, double rtol=4e-16, int max_iter=400):
    cdef double[::1] o = np.ascontiguousarray(np.abs(np.asarray(off, dtype=float)))
    cdef Py_ssize_t n = o.shape[0] + 1
    cdef Py_ssize_t npos = n // 2
    if npos == 0:
        return np.zeros(n)
    cdef double top = 0.0
    cdef Py_ssize_t i, j, it
    for i in range(o.shape[0]):
        if o[i] > top:
            top = o[i]
    pos_arr = np.empty(npos)
    cdef double[::1] pos = pos_arr
    cdef double lo, hi, mid
    cdef Py_ssize_t target
    for j in range(npos):
        target = n - npos + j
        lo = _TINY
        hi = 2.0 * top * (1 + 1e-12) + _TINY
        for it in range(max_iter):
            mid = sqrt(lo) * sqrt(hi)
            if _count_below(mid, o) >= target + 1:
                hi = mid
            else:
                lo = mid
            if hi / lo - 1 <= rtol:
                break
        pos[npos - 1 - j] = sqrt(lo) * sqrt(hi)
    middle = [0.0] if n % 2 else []
    return np.concatenate([pos_arr, middle, -pos_arr[::-1]])
