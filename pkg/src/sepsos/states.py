"""Bipartite density matrices and the separability-side tests.

Index convention: ``rho[(i, a), (j, b)] = rho[i * m + a, j * m + b]`` for
dims ``(n, m)``; the first factor is ``C^n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import HermitianMatrix, hermitian_eigenvalues
from .maps import MatrixMap
from .poly import Poly
from .scalars import ZERO, as_gauss

__all__ = [
    "DensityMatrix",
    "SeparableTerm",
    "PptResult",
    "partial_transpose",
    "partial_trace",
    "ppt_check",
    "random_separable",
    "apply_map_one_side",
    "embed_section",
    "section_predicate",
    "witness_value",
    "maximally_entangled",
    "maximally_mixed",
]

TRACE_TOL = 1e-12
EIG_TOL = 1e-10
SECTION_TOL = 1e-12


@dataclass(frozen=True)
class SeparableTerm:
    weight: float
    x: np.ndarray
    y: np.ndarray


class DensityMatrix:
    """A unit-trace PSD matrix on ``C^n (x) C^m``.

    ``provenance`` optionally keeps the product decomposition a sampled
    separable state was built from.
    """

    def __init__(self, dims, matrix, provenance=None, check: bool = True):
        n, m = (int(d) for d in dims)
        if n < 1 or m < 1:
            raise ValueError("dims must be positive")
        if not isinstance(matrix, HermitianMatrix):
            matrix = HermitianMatrix(matrix, "float" if isinstance(matrix, np.ndarray) else None)
        if matrix.dim != n * m:
            raise ValueError("matrix size does not match dims")
        self.dims = (n, m)
        self.matrix = matrix
        self.provenance = tuple(provenance) if provenance is not None else None
        if check:
            tr = self.trace
            if matrix.regime == "exact":
                if tr != 1:
                    raise ValueError("trace must be exactly 1")
            elif abs(tr - 1) > TRACE_TOL:
                raise ValueError("trace must be 1 within 1e-12")
            if min(hermitian_eigenvalues(matrix)) < -EIG_TOL:
                raise ValueError("density matrix has a negative eigenvalue")

    @property
    def trace(self):
        if self.matrix.regime == "exact":
            t = ZERO
            for i in range(self.matrix.dim):
                t = t + self.matrix.entry(i, i)
            return t.re
        return float(np.real(np.trace(self.matrix.to_numpy())))

    def to_numpy(self) -> np.ndarray:
        return self.matrix.to_numpy()

    def to_json(self) -> dict:
        out = self.matrix.to_json()
        out["dims"] = list(self.dims)
        if self.provenance is not None:
            out["provenance"] = [
                {"p": t.weight,
                 "x": [[float(v.real), float(v.imag)] for v in t.x],
                 "y": [[float(v.real), float(v.imag)] for v in t.y]}
                for t in self.provenance
            ]
        return out

    @classmethod
    def from_json(cls, data) -> "DensityMatrix":
        if "dims" not in data:
            raise ValueError("state JSON needs 'dims'")
        prov = None
        if data.get("provenance") is not None:
            prov = [SeparableTerm(float(t["p"]),
                                  np.array([complex(a, b) for a, b in t["x"]]),
                                  np.array([complex(a, b) for a, b in t["y"]]))
                    for t in data["provenance"]]
        return cls(data["dims"], HermitianMatrix.from_json(data), prov)


def _as_matrix(rho):
    if isinstance(rho, DensityMatrix):
        return rho.matrix, rho.dims
    if isinstance(rho, HermitianMatrix):
        return rho, None
    raise TypeError("expected a DensityMatrix or HermitianMatrix")


def _dims_for(rho, dims):
    mat, own = _as_matrix(rho)
    if dims is None:
        if own is None:
            raise ValueError("dims are required for a bare matrix")
        dims = own
    n, m = dims
    if n * m != mat.dim:
        raise ValueError("dims do not match the matrix size")
    return mat, (n, m)


def partial_transpose(rho, which_factor: int = 2, dims=None) -> HermitianMatrix:
    """Transpose one tensor factor: for the second, ``(i,a),(j,b) -> (i,b),(j,a)``."""
    mat, (n, m) = _dims_for(rho, dims)
    if which_factor not in (1, 2):
        raise ValueError("which_factor must be 1 or 2")
    if mat.regime == "float":
        a = mat.to_numpy().reshape(n, m, n, m)
        a = a.transpose(0, 3, 2, 1) if which_factor == 2 else a.transpose(2, 1, 0, 3)
        return HermitianMatrix(a.reshape(n * m, n * m), "float")
    rows = mat.rows
    out = [[ZERO] * (n * m) for _ in range(n * m)]
    for i in range(n):
        for a in range(m):
            for j in range(n):
                for b in range(m):
                    if which_factor == 2:
                        out[i * m + a][j * m + b] = rows[i * m + b][j * m + a]
                    else:
                        out[i * m + a][j * m + b] = rows[j * m + a][i * m + b]
    return HermitianMatrix(out, "exact")


def partial_trace(rho, which_factor: int = 2, dims=None):
    """Trace out one factor; returns a nested list (exact) or numpy array."""
    mat, (n, m) = _dims_for(rho, dims)
    if mat.regime == "float":
        a = mat.to_numpy().reshape(n, m, n, m)
        return np.einsum("iaja->ij", a) if which_factor == 2 else np.einsum("iaib->ab", a)
    rows = mat.rows
    if which_factor == 2:
        return [[sum((rows[i * m + a][j * m + a] for a in range(m)), ZERO) for j in range(n)] for i in range(n)]
    return [[sum((rows[i * m + a][i * m + b] for i in range(n)), ZERO) for b in range(m)] for a in range(m)]


@dataclass(frozen=True)
class PptResult:
    passed: bool
    min_eig_rho: float
    min_eig_pt: float

    @property
    def min_eigenvalue(self) -> float:
        return min(self.min_eig_rho, self.min_eig_pt)


def ppt_check(rho, tol: float = EIG_TOL, dims=None) -> PptResult:
    """Pass iff both ``rho`` and its partial transpose have ``lambda_min >= -tol``."""
    mat, dims = _dims_for(rho, dims)
    a = mat.to_numpy()
    n, m = dims
    pt = a.reshape(n, m, n, m).transpose(0, 3, 2, 1).reshape(n * m, n * m)
    e1 = float(np.linalg.eigvalsh(a)[0])
    e2 = float(np.linalg.eigvalsh(pt)[0])
    return PptResult(e1 >= -tol and e2 >= -tol, e1, e2)


def _unit_normal(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_separable(dims, k: int, seed: int) -> DensityMatrix:
    """``sum_k p_k x_k x_k^H (x) y_k y_k^H`` with Dirichlet weights and unit vectors."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n, m = dims
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(k))
    terms = []
    rho = np.zeros((n * m, n * m), dtype=complex)
    for t in range(k):
        x = _unit_normal(rng, n)
        y = _unit_normal(rng, m)
        v = np.kron(x, y)
        rho += w[t] * np.outer(v, v.conj())
        terms.append(SeparableTerm(float(w[t]), x, y))
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.real(np.trace(rho))
    return DensityMatrix((n, m), HermitianMatrix(rho, "float"), terms)


def product_state(x, y) -> DensityMatrix:
    """``x x^H (x) y y^H`` for unit vectors (floating regime)."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    v = np.kron(x, y)
    return DensityMatrix((len(x), len(y)), HermitianMatrix(np.outer(v, v.conj()), "float"),
                         [SeparableTerm(1.0, x, y)])


def maximally_entangled(d: int = 2, exact: bool = True) -> DensityMatrix:
    """``|psi><psi|`` with ``psi = sum_i e_i (x) e_i / sqrt(d)``."""
    size = d * d
    if exact:
        rows = [[ZERO] * size for _ in range(size)]
        for i in range(d):
            for j in range(d):
                rows[i * d + i][j * d + j] = as_gauss(Fraction(1, d))
        return DensityMatrix((d, d), HermitianMatrix(rows, "exact"))
    a = np.zeros((size, size), dtype=complex)
    for i in range(d):
        for j in range(d):
            a[i * d + i, j * d + j] = 1.0 / d
    return DensityMatrix((d, d), HermitianMatrix(a, "float"))


def maximally_mixed(dims, exact: bool = True) -> DensityMatrix:
    n, m = dims
    size = n * m
    if exact:
        rows = [[as_gauss(Fraction(1, size)) if i == j else ZERO for j in range(size)] for i in range(size)]
        return DensityMatrix(dims, HermitianMatrix(rows, "exact"))
    return DensityMatrix(dims, HermitianMatrix(np.eye(size) / size, "float"))


def apply_map_one_side(phi: MatrixMap, rho, dims=None) -> HermitianMatrix:
    """``(I (x) Phi)(rho)``: ``Phi`` acts on the second factor of each block."""
    mat, (n, m) = _dims_for(rho, dims)
    if phi.in_dim != m:
        raise ValueError("map input dimension does not match the second factor")
    k = phi.out_dim
    if mat.regime == "float" or phi.regime == "float":
        a = mat.to_numpy().reshape(n, m, n, m)
        c = phi.choi.to_numpy().reshape(m, k, m, k)
        out = np.einsum("iajb,acbd->icjd", a, c).reshape(n * k, n * k)
        return HermitianMatrix(0.5 * (out + out.conj().T), "float")
    rows = mat.rows
    out = [[ZERO] * (n * k) for _ in range(n * k)]
    for i in range(n):
        for j in range(n):
            for a in range(m):
                for b in range(m):
                    r = rows[i * m + a][j * m + b]
                    if not r:
                        continue
                    for c in range(k):
                        for d in range(k):
                            e = phi.choi.entry(a * k + c, b * k + d)
                            if e:
                                out[i * k + c][j * k + d] = out[i * k + c][j * k + d] + r * e
    return HermitianMatrix(out, "exact")


def embed_section(rho: DensityMatrix, N: int) -> DensityMatrix:
    """Pad the first factor from ``C^n`` to ``C^N`` with zeros."""
    n, m = rho.dims
    if N < n:
        raise ValueError("N must be at least n")
    size = N * m
    mat = rho.matrix
    if mat.regime == "float":
        a = np.zeros((size, size), dtype=complex)
        a[: n * m, : n * m] = mat.to_numpy()
        out = HermitianMatrix(a, "float")
    else:
        rows = [[ZERO] * size for _ in range(size)]
        for i in range(n * m):
            for j in range(n * m):
                rows[i][j] = mat.entry(i, j)
        out = HermitianMatrix(rows, "exact")
    prov = None
    if rho.provenance is not None:
        prov = [SeparableTerm(t.weight, np.concatenate([t.x, np.zeros(N - n)]), t.y) for t in rho.provenance]
    return DensityMatrix((N, m), out, prov, check=False)


def section_predicate(rho: DensityMatrix, n: int, tol: float = SECTION_TOL) -> bool:
    """``(Tr_2 rho)_ii = 0`` for every ``i >= n`` (0-based)."""
    N, _ = rho.dims
    if N < n:
        raise ValueError("n exceeds the first dimension")
    red = partial_trace(rho, 2)
    for i in range(n, N):
        v = red[i][i]
        if abs(complex(v)) > tol:
            return False
    return True


def witness_value(p: Poly, rho, dims=None) -> float:
    """``<p, rho>``: each ``x_i y_k conj(x_j y_l)`` term reads ``rho[(i,k),(j,l)]``.

    For a separable ``rho = sum p_t (x_t x_t^H) (x) (y_t y_t^H)`` this equals
    ``sum p_t p(x_t, y_t)``, so a nonnegative biquadratic ``p`` is
    nonnegative on every separable state.
    """
    mat, (n, m) = _dims_for(rho, dims)
    if p.nvars != n + m:
        raise ValueError("polynomial variables do not match dims")
    a = mat.to_numpy()
    total = 0j
    for (u, v), c in p.terms.items():
        iu = [t for t in range(n) if u[t]]
        ku = [t - n for t in range(n, n + m) if u[t]]
        iv = [t for t in range(n) if v[t]]
        kv = [t - n for t in range(n, n + m) if v[t]]
        if not (len(iu) == len(ku) == len(iv) == len(kv) == 1 and sum(u) == 2 and sum(v) == 2):
            raise ValueError("witness_value needs a biquadratic form in (x, y)")
        total += complex(c) * a[iu[0] * m + ku[0], iv[0] * m + kv[0]]
    return float(total.real)
