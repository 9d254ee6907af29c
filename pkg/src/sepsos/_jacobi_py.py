"""Pure-Python cyclic Jacobi eigenvalue sweep (fallback for the compiled kernel)."""

import math


def jacobi_eigenvalues(a, tol=1e-14, max_sweeps=50):
    """Eigenvalues of a real symmetric matrix, ascending.

    ``a`` is any 2-D sequence of floats; it is copied.  Sweeps stop when the
    off-diagonal Frobenius norm drops below ``tol * ||a||_F`` or after
    ``max_sweeps``.  Returns ``(eigenvalues, sweeps)``.
    """
    m = [[float(v) for v in row] for row in a]
    n = len(m)
    norm = math.sqrt(sum(v * v for row in m for v in row))
    sweeps = 0
    if n == 0 or norm == 0.0:
        return sorted(m[i][i] for i in range(n)), 0
    thresh = tol * norm
    while sweeps < max_sweeps:
        off = 0.0
        for p in range(n):
            rp = m[p]
            for q in range(p + 1, n):
                off += rp[q] * rp[q]
        if math.sqrt(2.0 * off) <= thresh:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p][q]
                if apq == 0.0:
                    continue
                app = m[p][p]
                aqq = m[q][q]
                theta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    mkp = m[k][p]
                    mkq = m[k][q]
                    m[k][p] = c * mkp - s * mkq
                    m[k][q] = s * mkp + c * mkq
                rowp = m[p]
                rowq = m[q]
                for k in range(n):
                    mpk = rowp[k]
                    mqk = rowq[k]
                    rowp[k] = c * mpk - s * mqk
                    rowq[k] = s * mpk + c * mqk
    return sorted(m[i][i] for i in range(n)), sweeps
