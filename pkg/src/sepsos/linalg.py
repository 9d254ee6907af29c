"""Dense Hermitian linear algebra in a floating and an exact regime.

Floating matrices are numpy ``complex128`` arrays; exact matrices hold
:class:`~sepsos.scalars.GaussQ` entries.  The exact routines decide
positive semidefiniteness without rounding and return a checkable witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .kernels import jacobi_eigenvalues
from .scalars import GaussQ, ONE, ZERO, as_gauss, format_fraction, parse_scalar

__all__ = [
    "HermitianMatrix",
    "PsdWitness",
    "LinearSolution",
    "hermitian_eigenvalues",
    "rational_psd_check",
    "solve_linear_exact",
    "exact_matmul",
    "exact_adjoint",
    "quadratic_form",
]

FLOAT_HERMITIAN_TOL = 1e-12


class HermitianMatrix:
    """A Hermitian matrix tagged with its scalar regime (``"exact"`` or ``"float"``).

    Exact input must be exactly Hermitian.  Floating input is accepted when
    it is Hermitian within ``1e-12`` absolute and is then symmetrized.
    """

    __slots__ = ("dim", "regime", "_rows", "_array")

    def __init__(self, entries, regime: str | None = None):
        if regime is None:
            regime = "float" if isinstance(entries, np.ndarray) else "exact"
        if regime == "exact":
            rows = [tuple(as_gauss(v) for v in row) for row in entries]
            n = len(rows)
            if any(len(r) != n for r in rows):
                raise ValueError("matrix must be square")
            for i in range(n):
                for j in range(i, n):
                    if rows[i][j] != rows[j][i].conjugate():
                        raise ValueError(f"matrix is not Hermitian at ({i}, {j})")
            self._rows = tuple(rows)
            self._array = None
            self.dim = n
        elif regime == "float":
            a = np.array(entries, dtype=complex)
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise ValueError("matrix must be square")
            if a.size and np.max(np.abs(a - a.conj().T)) > FLOAT_HERMITIAN_TOL:
                raise ValueError("matrix is not Hermitian within tolerance")
            a = 0.5 * (a + a.conj().T)
            a.setflags(write=False)
            self._array = a
            self._rows = None
            self.dim = a.shape[0]
        else:
            raise ValueError(f"unknown regime {regime!r}")
        self.regime = regime

    @property
    def rows(self) -> tuple:
        if self.regime != "exact":
            raise TypeError("rows are only available in the exact regime")
        return self._rows

    def entry(self, i: int, j: int):
        if self.regime == "exact":
            return self._rows[i][j]
        return complex(self._array[i, j])

    def to_numpy(self) -> np.ndarray:
        if self.regime == "float":
            return np.array(self._array)
        return np.array([[complex(v) for v in row] for row in self._rows], dtype=complex)

    def __eq__(self, other):
        if not isinstance(other, HermitianMatrix) or other.regime != self.regime:
            return NotImplemented
        if self.regime == "exact":
            return self._rows == other._rows
        return self._array.shape == other._array.shape and bool(np.all(self._array == other._array))

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim}, regime={self.regime!r})"

    # JSON ----------------------------------------------------------------
    def to_json(self) -> dict:
        out = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                v = self.entry(i, j)
                if self.regime == "exact":
                    row.append({"re": format_fraction(v.re), "im": format_fraction(v.im)})
                else:
                    row.append({"re": repr(v.real), "im": repr(v.imag)})
            out.append(row)
        return {"dim": self.dim, "regime": self.regime, "entries": out}

    @classmethod
    def from_json(cls, data: dict, regime: str | None = None) -> "HermitianMatrix":
        entries = data["entries"]
        if regime is None:
            regime = data.get("regime") or _guess_regime(entries)
        dim = int(data.get("dim", len(entries)))
        if len(entries) != dim:
            raise ValueError("'dim' does not match the number of rows")
        vals = [[parse_scalar(e.get("re"), e.get("im"), regime) for e in row] for row in entries]
        if regime == "float":
            return cls(np.array(vals, dtype=complex).reshape(dim, dim), "float")
        return cls(vals, "exact")


def _guess_regime(entries) -> str:
    for row in entries:
        for e in row:
            for key in ("re", "im"):
                s = str(e.get(key, "0"))
                if any(ch in s for ch in ".eE") and "/" not in s:
                    return "float"
    return "exact"


# ---------------------------------------------------------------------------
# floating eigenvalues


def hermitian_eigenvalues(m) -> list[float]:
    """Ascending eigenvalues of a floating Hermitian matrix.

    The n x n complex matrix ``H = X + iY`` is embedded as the real symmetric
    ``[[X, -Y], [Y, X]]`` whose spectrum is that of ``H`` with every
    eigenvalue doubled; a cyclic Jacobi sweep diagonalizes the embedding.
    """
    if isinstance(m, HermitianMatrix):
        a = m.to_numpy()
    else:
        a = np.asarray(m, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        if a.size and np.max(np.abs(a - a.conj().T)) > FLOAT_HERMITIAN_TOL * max(1.0, np.max(np.abs(a))):
            raise ValueError("matrix is not Hermitian within tolerance")
        a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    if n == 0:
        return []
    if not np.any(a.imag):
        vals, _ = jacobi_eigenvalues(np.ascontiguousarray(a.real))
        return [float(v) for v in vals]
    emb = np.block([[a.real, -a.imag], [a.imag, a.real]])
    vals, _ = jacobi_eigenvalues(np.ascontiguousarray(emb))
    return [float(v) for v in vals[::2]]


# ---------------------------------------------------------------------------
# exact PSD decision


@dataclass(frozen=True)
class PsdWitness:
    """Outcome of :func:`rational_psd_check`.

    ``kind == "factorization"``: ``M = L diag(d) L^H`` with ``L`` an n x r
    matrix (columns are unit lower-triangular under ``perm``) and ``d > 0``.
    ``kind == "violating-vector"``: ``vector^H M vector == value < 0``.
    """

    kind: str
    L: tuple | None = None
    d: tuple | None = None
    perm: tuple | None = None
    vector: tuple | None = None
    value: Fraction | None = None

    @property
    def is_psd(self) -> bool:
        return self.kind == "factorization"

    @property
    def rank(self) -> int:
        return len(self.d) if self.d is not None else -1

    def reconstruct(self) -> list[list[GaussQ]]:
        """Multiply the factorization back out."""
        if not self.is_psd:
            raise ValueError("no factorization in a violating-vector witness")
        n = len(self.L)
        r = len(self.d)
        out = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                s = ZERO
                for k in range(r):
                    lik = self.L[i][k]
                    ljk = self.L[j][k]
                    if lik and ljk:
                        s = s + lik * self.d[k] * ljk.conjugate()
                out[i][j] = s
        return out


def _exact_rows(m) -> list[list[GaussQ]]:
    if isinstance(m, HermitianMatrix):
        if m.regime != "exact":
            raise TypeError("rational_psd_check needs an exact matrix")
        return [list(r) for r in m.rows]
    rows = [[as_gauss(v) for v in row] for row in m]
    n = len(rows)
    for i in range(n):
        if len(rows[i]) != n:
            raise ValueError("matrix must be square")
        for j in range(i, n):
            if rows[i][j] != rows[j][i].conjugate():
                raise ValueError("matrix is not Hermitian")
    return rows


def rational_psd_check(m) -> PsdWitness:
    """Exact PSD decision by symmetrically pivoted LDL^H over Gaussian rationals.

    The pivot is the largest remaining diagonal entry.  A negative pivot, or a
    zero pivot whose row is not identically zero, yields an explicit vector
    ``v`` with ``v^H M v < 0``.
    """
    rows = _exact_rows(m)
    n = len(rows)
    real = all(not v.im for row in rows for v in row)
    # Schur complement stored as separate real/imag Fraction tables.
    sre = [[v.re for v in row] for row in rows]
    sim = None if real else [[v.im for v in row] for row in rows]
    remaining = list(range(n))
    cols_re: list[list[Fraction]] = []
    cols_im: list[list[Fraction]] = []
    pivots: list[int] = []
    diag: list[Fraction] = []
    zero = Fraction(0)

    def violating(k_vec: dict[int, GaussQ]) -> PsdWitness:
        # k_vec assigns the non-eliminated coordinates; solve l_j^H v = 0 backwards.
        v = [ZERO] * n
        for idx, val in k_vec.items():
            v[idx] = val
        for j in range(len(pivots) - 1, -1, -1):
            p = pivots[j]
            acc = ZERO
            for i in range(n):
                if i == p:
                    continue
                li = GaussQ(cols_re[j][i], cols_im[j][i] if cols_im else 0)
                if li and v[i]:
                    acc = acc + li.conjugate() * v[i]
            v[p] = -acc
        value = quadratic_form(rows, v)
        if not value < 0:  # pragma: no cover - guards the construction
            raise AssertionError("internal error: witness vector is not violating")
        return PsdWitness(kind="violating-vector", vector=tuple(v), value=value)

    while remaining:
        k = max(remaining, key=lambda i: (sre[i][i], -i))
        dk = sre[k][k]
        if dk < 0:
            return violating({k: ONE})
        if dk == 0:
            for a in remaining:
                if sre[a][a] < 0:
                    return violating({a: ONE})
            for a in remaining:
                for b in remaining:
                    if a != b and (sre[a][b] or (sim is not None and sim[a][b])):
                        sab = GaussQ(sre[a][b], sim[a][b] if sim is not None else 0)
                        return violating({a: ONE, b: -sab.conjugate()})
            break
        remaining.remove(k)
        lre = [zero] * n
        lim = [zero] * n
        lre[k] = Fraction(1)
        for i in remaining:
            lre[i] = sre[i][k] / dk
            if sim is not None:
                lim[i] = sim[i][k] / dk
        # S_ij -= l_i d l_j^* over remaining indices
        if sim is None:
            for i in remaining:
                li = lre[i]
                if not li:
                    continue
                row = sre[i]
                f = li * dk
                for j in remaining:
                    lj = lre[j]
                    if lj:
                        row[j] -= f * lj
        else:
            for i in remaining:
                ar, ai = lre[i] * dk, lim[i] * dk
                if not ar and not ai:
                    continue
                rr = sre[i]
                ri = sim[i]
                for j in remaining:
                    br, bi = lre[j], -lim[j]
                    if br or bi:
                        rr[j] -= ar * br - ai * bi
                        ri[j] -= ar * bi + ai * br
        cols_re.append(lre)
        cols_im.append(lim)
        pivots.append(k)
        diag.append(dk)

    L = tuple(
        tuple(GaussQ(cols_re[c][i], cols_im[c][i]) for c in range(len(pivots))) for i in range(n)
    )
    return PsdWitness(kind="factorization", L=L, d=tuple(diag), perm=tuple(pivots))


def quadratic_form(rows, v) -> Fraction:
    """Exact ``v^H M v`` (real for Hermitian ``M``)."""
    n = len(rows)
    total = ZERO
    for i in range(n):
        if not v[i]:
            continue
        s = ZERO
        row = rows[i]
        for j in range(n):
            if v[j] and row[j]:
                s = s + row[j] * v[j]
        total = total + v[i].conjugate() * s
    if total.im:
        raise ValueError("quadratic form is not real; matrix is not Hermitian")
    return total.re


# ---------------------------------------------------------------------------
# exact linear systems


@dataclass(frozen=True)
class LinearSolution:
    """Exact solution set of ``A x = b``.

    ``kind`` is ``"unique"``, ``"family"`` (particular solution plus a
    nonempty kernel basis) or ``"inconsistent"``.
    """

    kind: str
    particular: tuple | None
    kernel: tuple
    pivots: tuple
    rank: int

    @property
    def consistent(self) -> bool:
        return self.kind != "inconsistent"


def _rref(mat: list[list[GaussQ]], ncols: int):
    """In-place reduced row echelon form on the first ``ncols`` columns."""
    pivots = []
    r = 0
    nrows = len(mat)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        best = None
        for i in range(r, nrows):
            v = mat[i][c]
            if v:
                # smallest height keeps denominators small; ties by row order
                h = v.abs2()
                h = h.numerator.bit_length() + h.denominator.bit_length()
                if best is None or h < best:
                    best, piv = h, i
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = ONE / mat[r][c]
        mat[r] = [v * inv if v else v for v in mat[r]]
        prow = mat[r]
        for i in range(nrows):
            if i != r:
                f = mat[i][c]
                if f:
                    row = mat[i]
                    mat[i] = [a - f * b if b else a for a, b in zip(row, prow)]
        pivots.append(c)
        r += 1
    return pivots


def solve_linear_exact(a: Sequence[Sequence], b: Sequence | None = None) -> LinearSolution:
    """Solve ``A x = b`` exactly over Gaussian rationals.

    ``b`` defaults to zero (pure kernel computation).  Kernel vectors are
    normalized so that their first nonzero coordinate is 1.
    """
    rows = [[as_gauss(v) for v in row] for row in a]
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    if b is None:
        b = [ZERO] * m
    b = [as_gauss(v) for v in b]
    if len(b) != m:
        raise ValueError("dimension mismatch between A and b")
    aug = [row + [bv] for row, bv in zip(rows, b)]
    pivots = _rref(aug, ncols)
    rank = len(pivots)
    for i in range(rank, m):
        if aug[i][ncols]:
            return LinearSolution("inconsistent", None, (), tuple(pivots), rank)
    x = [ZERO] * ncols
    for i, c in enumerate(pivots):
        x[c] = aug[i][ncols]
    free = [c for c in range(ncols) if c not in set(pivots)]
    kernel = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for i, c in enumerate(pivots):
            v[c] = -aug[i][f]
        first = next(val for val in v if val)
        if first != ONE:
            v = [val / first for val in v]
        kernel.append(tuple(v))
    kind = "unique" if not kernel else "family"
    return LinearSolution(kind, tuple(x), tuple(kernel), tuple(pivots), rank)


def exact_matmul(a, b) -> list[list[GaussQ]]:
    n, k = len(a), len(b)
    p = len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(p):
            s = ZERO
            for t in range(k):
                if ai[t] and b[t][j]:
                    s = s + ai[t] * b[t][j]
            row.append(s)
        out.append(row)
    return out


def exact_adjoint(a) -> list[list[GaussQ]]:
    if not a:
        return []
    return [[a[i][j].conjugate() for i in range(len(a))] for j in range(len(a[0]))]
