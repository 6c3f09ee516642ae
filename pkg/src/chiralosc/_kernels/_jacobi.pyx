# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi eigenvalue sweeps for real symmetric matrices."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


cdef double _offdiag_norm(double[:, ::1] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s += a[i, j] * a[i, j]
    return sqrt(2.0 * s)


cdef void _rotate(double[:, ::1] a, double[:, ::1] v, Py_ssize_t n,
                  Py_ssize_t p, Py_ssize_t q) nogil:
    cdef double apq = a[p, q]
    cdef double theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    cdef double t, c, s, akp, akq
    cdef Py_ssize_t k
    if theta >= 0:
        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
    else:
        t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
    c = 1.0 / sqrt(t * t + 1.0)
    s = t * c
    for k in range(n):
        akp = a[k, p]
        akq = a[k, q]
        a[k, p] = c * akp - s * akq
        a[k, q] = s * akp + c * akq
    for k in range(n):
        akp = a[p, k]
        akq = a[q, k]
        a[p, k] = c * akp - s * akq
        a[q, k] = s * akp + c * akq
    a[p, q] = 0.0
    a[q, p] = 0.0
    for k in range(n):
        akp = v[k, p]
        akq = v[k, q]
        v[k, p] = c * akp - s * akq
        v[k, q] = s * akp + c * akq


def jacobi_sweeps(double[:, ::1] a, double[:, ::1] v, double target, int max_sweeps):
    """Run cyclic sweeps in place until the off-diagonal norm <= target.

    Returns ``(sweeps_used, final_offdiag_norm)``.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q
    cdef int sweep = 0
    cdef double off = _offdiag_norm(a, n)
    with nogil:
        while off > target and sweep < max_sweeps:
            for p in range(n - 1):
                for q in range(p + 1, n):
                    if a[p, q] != 0.0:
                        _rotate(a, v, n, p, q)
            sweep += 1
            off = _offdiag_norm(a, n)
    return sweep, off
