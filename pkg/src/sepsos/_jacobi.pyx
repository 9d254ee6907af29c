# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi eigenvalue sweep."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, copysign

cnp.import_array()


def jacobi_eigenvalues(a, double tol=1e-14, int max_sweeps=50):
    """Eigenvalues of a real symmetric matrix, ascending; returns (eigenvalues, sweeps)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] arr = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] m = arr
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t p, q, k
    cdef double norm = 0.0, off, thresh, apq, app, aqq, theta, t, c, s, x, y
    cdef int sweeps = 0
    for p in range(n):
        for q in range(n):
            norm += m[p, q] * m[p, q]
    norm = sqrt(norm)
    if n == 0 or norm == 0.0:
        return sorted([m[p, p] for p in range(n)]), 0
    thresh = tol * norm
    while sweeps < max_sweeps:
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += m[p, q] * m[p, q]
        if sqrt(2.0 * off) <= thresh:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if apq == 0.0:
                    continue
                app = m[p, p]
                aqq = m[q, q]
                theta = (aqq - app) / (2.0 * apq)
                t = copysign(1.0, theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    x = m[k, p]
                    y = m[k, q]
                    m[k, p] = c * x - s * y
                    m[k, q] = s * x + c * y
                for k in range(n):
                    x = m[p, k]
                    y = m[q, k]
                    m[p, k] = c * x - s * y
                    m[q, k] = s * x + c * y
    return sorted([m[p, p] for p in range(n)]), sweeps
