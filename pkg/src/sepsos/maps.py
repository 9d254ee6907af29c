"""Linear maps on matrices, their Choi matrices and biquadratic forms.

A map ``Phi: M_m -> M_n`` is stored through its Choi matrix
``C = sum_ij E_ij (x) Phi(E_ij)``, so ``C[i*n + a, j*n + b] = Phi(E_ij)[a, b]``.
Kraus operators ``V`` have shape ``n x m`` and act as ``X -> V X V^H``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import HermitianMatrix
from .poly import HermitianPolynomial
from .scalars import GaussQ, ONE, ZERO, as_gauss, format_fraction, parse_scalar

__all__ = [
    "MatrixMap",
    "KrausSet",
    "ORIENTATIONS",
    "apply",
    "map_to_biquadratic",
    "biquadratic_to_map",
    "cp_from_kraus",
    "compose_transpose",
    "decomposable_from",
    "identity_map",
    "transpose_map",
    "positivity_sample",
    "random_kraus",
    "random_decomposable",
]

ORIENTATIONS = ("input_first", "output_first")


class MatrixMap:
    """Hermitian-preserving linear map ``M_in_dim -> M_out_dim`` held as its Choi matrix."""

    __slots__ = ("in_dim", "out_dim", "choi", "orientation")

    def __init__(self, in_dim: int, out_dim: int, choi: HermitianMatrix, orientation: str = "input_first"):
        if choi.dim != in_dim * out_dim:
            raise ValueError("Choi matrix size must be in_dim * out_dim")
        if orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be one of {ORIENTATIONS}")
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.choi = choi
        self.orientation = orientation

    @property
    def regime(self) -> str:
        return self.choi.regime

    def image_of_unit(self, i: int, j: int):
        """``Phi(E_ij)`` as nested lists (exact) or a numpy array (float)."""
        n = self.out_dim
        if self.regime == "exact":
            return [[self.choi.entry(i * n + a, j * n + b) for b in range(n)] for a in range(n)]
        c = self.choi.to_numpy()
        return c[i * n:(i + 1) * n, j * n:(j + 1) * n]

    @classmethod
    def from_unit_images(cls, in_dim, out_dim, images, regime="exact", orientation="input_first"):
        """Build from ``images[i][j] = Phi(E_ij)``."""
        n, m = out_dim, in_dim
        if regime == "exact":
            rows = [[ZERO] * (n * m) for _ in range(n * m)]
            for i in range(m):
                for j in range(m):
                    img = images[i][j]
                    for a in range(n):
                        for b in range(n):
                            rows[i * n + a][j * n + b] = as_gauss(img[a][b])
            return cls(m, n, HermitianMatrix(rows, "exact"), orientation)
        c = np.zeros((n * m, n * m), dtype=complex)
        for i in range(m):
            for j in range(m):
                c[i * n:(i + 1) * n, j * n:(j + 1) * n] = np.asarray(images[i][j], dtype=complex)
        return cls(m, n, HermitianMatrix(c, "float"), orientation)

    def to_float(self) -> "MatrixMap":
        if self.regime == "float":
            return self
        return MatrixMap(self.in_dim, self.out_dim, HermitianMatrix(self.choi.to_numpy(), "float"), self.orientation)

    def __eq__(self, other):
        if not isinstance(other, MatrixMap):
            return NotImplemented
        return (self.in_dim, self.out_dim) == (other.in_dim, other.out_dim) and self.choi == other.choi

    def __add__(self, other):
        if (self.in_dim, self.out_dim) != (other.in_dim, other.out_dim):
            raise ValueError("shape mismatch")
        if self.regime != other.regime:
            raise TypeError("mixed-regime arithmetic is not allowed")
        if self.regime == "exact":
            rows = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.choi.rows, other.choi.rows)]
            return MatrixMap(self.in_dim, self.out_dim, HermitianMatrix(rows, "exact"), self.orientation)
        return MatrixMap(
            self.in_dim, self.out_dim,
            HermitianMatrix(self.choi.to_numpy() + other.choi.to_numpy(), "float"), self.orientation,
        )

    def __repr__(self):
        return f"MatrixMap(in_dim={self.in_dim}, out_dim={self.out_dim}, regime={self.regime!r})"

    def to_json(self) -> dict:
        d = self.choi.to_json()
        d.update({"in_dim": self.in_dim, "out_dim": self.out_dim, "orientation": self.orientation})
        return d

    @classmethod
    def from_json(cls, data) -> "MatrixMap":
        choi = HermitianMatrix.from_json(data)
        return cls(int(data["in_dim"]), int(data["out_dim"]), choi, data.get("orientation", "input_first"))


@dataclass(frozen=True)
class KrausSet:
    """Weighted Kraus operators: ``S(X) = sum_t w_t V_t X V_t^H``.

    Weights default to 1.  They let exact factorizations ``L D L^H`` be turned
    into Kraus form without square roots.  An empty set (zero map) must give
    its shape explicitly.
    """

    operators: tuple
    weights: tuple | None = None
    in_dim: int | None = None
    out_dim: int | None = None

    def __post_init__(self):
        ops = tuple(self.operators)
        object.__setattr__(self, "operators", ops)
        if ops:
            shape = _shape(ops[0])
            for v in ops:
                if _shape(v) != shape:
                    raise ValueError("Kraus operators must share one shape")
            n, m = shape
            if self.out_dim not in (None, n) or self.in_dim not in (None, m):
                raise ValueError("declared dims disagree with operator shape")
            object.__setattr__(self, "out_dim", n)
            object.__setattr__(self, "in_dim", m)
        elif self.in_dim is None or self.out_dim is None:
            raise ValueError("an empty Kraus set needs in_dim and out_dim")
        if self.weights is not None:
            w = tuple(self.weights)
            if len(w) != len(ops):
                raise ValueError("one weight per operator")
            object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.operators)

    @property
    def is_empty(self) -> bool:
        return not self.operators

    def weight(self, t):
        return 1 if self.weights is None else self.weights[t]

    @property
    def exact(self) -> bool:
        return all(not isinstance(v, np.ndarray) for v in self.operators) and (
            self.weights is None or all(not isinstance(w, float) for w in self.weights)
        )


def _shape(v):
    if isinstance(v, np.ndarray):
        return v.shape
    return (len(v), len(v[0]) if v else 0)


# ---------------------------------------------------------------------------


def apply(phi: MatrixMap, x):
    """``Phi(X) = sum_ij X_ij Phi(E_ij)``."""
    m, n = phi.in_dim, phi.out_dim
    if phi.regime == "float" or isinstance(x, np.ndarray):
        xa = np.asarray(x, dtype=complex)
        if xa.shape != (m, m):
            raise ValueError("input matrix has the wrong shape")
        c = phi.choi.to_numpy().reshape(m, n, m, n)
        return np.einsum("ij,iajb->ab", xa, c)
    if len(x) != m or any(len(r) != m for r in x):
        raise ValueError("input matrix has the wrong shape")
    out = [[ZERO] * n for _ in range(n)]
    for i in range(m):
        for j in range(m):
            xij = as_gauss(x[i][j])
            if not xij:
                continue
            for a in range(n):
                for b in range(n):
                    c = phi.choi.entry(i * n + a, j * n + b)
                    if c:
                        out[a][b] = out[a][b] + xij * c
    return out


def _var_layout(phi_in, phi_out, orientation):
    if orientation == "input_first":
        names = [f"x{i + 1}" for i in range(phi_in)] + [f"y{k + 1}" for k in range(phi_out)]
        in_idx = list(range(phi_in))
        out_idx = list(range(phi_in, phi_in + phi_out))
        blocks = [("x", tuple(in_idx)), ("y", tuple(out_idx))]
    elif orientation == "output_first":
        names = [f"x{k + 1}" for k in range(phi_out)] + [f"y{i + 1}" for i in range(phi_in)]
        out_idx = list(range(phi_out))
        in_idx = list(range(phi_out, phi_out + phi_in))
        blocks = [("x", tuple(out_idx)), ("y", tuple(in_idx))]
    else:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    return names, in_idx, out_idx, blocks


def map_to_biquadratic(phi: MatrixMap, orientation: str | None = None) -> HermitianPolynomial:
    """The form ``w^H Phi(v v^H) w`` with ``v`` the input and ``w`` the output vector.

    ``"input_first"`` orders the variables as (input block ``x``, output block
    ``y``), giving ``p(x, y) = y^H Phi(x x^H) y``.  ``"output_first"`` orders
    them (output block ``x``, input block ``y``), giving ``x^H Phi(y y^H) x``.
    In both cases the coefficient of ``v_i conj(v_j) w_k conj(w_l)`` is
    ``Phi(E_ij)[l, k]``.
    """
    orientation = orientation or phi.orientation
    m, n = phi.in_dim, phi.out_dim
    names, in_idx, out_idx, blocks = _var_layout(m, n, orientation)
    nv = m + n
    terms = {}
    for i in range(m):
        for j in range(m):
            for k in range(n):
                for l in range(n):
                    c = phi.choi.entry(i * n + l, j * n + k)
                    if not c:
                        continue
                    u = [0] * nv
                    v = [0] * nv
                    u[in_idx[i]] += 1
                    v[in_idx[j]] += 1
                    u[out_idx[k]] += 1
                    v[out_idx[l]] += 1
                    key = (tuple(u), tuple(v))
                    terms[key] = terms.get(key, 0) + c
    return HermitianPolynomial(nv, terms, phi.regime, names, blocks)


def biquadratic_to_map(p: HermitianPolynomial, orientation: str = "input_first", blocks=None) -> MatrixMap:
    """Inverse of :func:`map_to_biquadratic`.

    ``blocks`` may give ``(input_indices, output_indices)`` explicitly; by
    default the first two blocks of ``p`` are used in the order fixed by
    ``orientation``.
    """
    if blocks is None:
        if len(p.blocks) != 2:
            raise ValueError("polynomial needs exactly two variable blocks")
        b0, b1 = p.blocks[0][1], p.blocks[1][1]
        in_idx, out_idx = (b0, b1) if orientation == "input_first" else (b1, b0)
    else:
        in_idx, out_idx = blocks
    in_idx, out_idx = list(in_idx), list(out_idx)
    m, n = len(in_idx), len(out_idx)
    pos_in = {g: i for i, g in enumerate(in_idx)}
    pos_out = {g: k for k, g in enumerate(out_idx)}
    exact = p.regime == "exact"
    images = [[[[ZERO if exact else 0j] * n for _ in range(n)] for _ in range(m)] for _ in range(m)]
    for (u, v), c in p.terms.items():
        ui = [g for g in in_idx for _ in range(u[g])]
        vi = [g for g in in_idx for _ in range(v[g])]
        uo = [g for g in out_idx for _ in range(u[g])]
        vo = [g for g in out_idx for _ in range(v[g])]
        extra = sum(u) + sum(v) - len(ui) - len(vi) - len(uo) - len(vo)
        if len(ui) != 1 or len(vi) != 1 or len(uo) != 1 or len(vo) != 1 or extra:
            raise ValueError("polynomial is not biquadratic in the two blocks")
        i, j = pos_in[ui[0]], pos_in[vi[0]]
        k, l = pos_out[uo[0]], pos_out[vo[0]]
        images[i][j][l][k] = c
    if not exact:
        images = [[np.array(img, dtype=complex) for img in row] for row in images]
    return MatrixMap.from_unit_images(m, n, images, p.regime, orientation)


def cp_from_kraus(k: KrausSet) -> MatrixMap:
    """Choi matrix of ``X -> sum_t w_t V_t X V_t^H``."""
    m, n = k.in_dim, k.out_dim
    if k.exact:
        rows = [[ZERO] * (n * m) for _ in range(n * m)]
        for t, v in enumerate(k.operators):
            w = as_gauss(k.weight(t))
            vv = [[as_gauss(x) for x in row] for row in v]
            for i in range(m):
                for a in range(n):
                    via = vv[a][i]
                    if not via:
                        continue
                    f = w * via
                    for j in range(m):
                        for b in range(n):
                            vjb = vv[b][j]
                            if vjb:
                                rows[i * n + a][j * n + b] = rows[i * n + a][j * n + b] + f * vjb.conjugate()
        return MatrixMap(m, n, HermitianMatrix(rows, "exact"))
    c = np.zeros((m, n, m, n), dtype=complex)
    for t, v in enumerate(k.operators):
        va = np.asarray(v, dtype=complex)
        c += float(k.weight(t)) * np.einsum("ai,bj->iajb", va, va.conj())
    return MatrixMap(m, n, HermitianMatrix(c.reshape(n * m, n * m), "float"))


def compose_transpose(phi: MatrixMap) -> MatrixMap:
    """``Phi o T``: its Choi matrix is the partial transpose on the input factor."""
    m, n = phi.in_dim, phi.out_dim
    if phi.regime == "exact":
        rows = [[phi.choi.entry(j * n + a, i * n + b) for j in range(m) for b in range(n)]
                for i in range(m) for a in range(n)]
        return MatrixMap(m, n, HermitianMatrix(rows, "exact"), phi.orientation)
    c = phi.choi.to_numpy().reshape(m, n, m, n).transpose(2, 1, 0, 3).reshape(n * m, n * m)
    return MatrixMap(m, n, HermitianMatrix(c, "float"), phi.orientation)


def _zero_map(m, n, exact=True):
    if exact:
        rows = [[ZERO] * (n * m) for _ in range(n * m)]
        return MatrixMap(m, n, HermitianMatrix(rows, "exact"))
    return MatrixMap(m, n, HermitianMatrix(np.zeros((n * m, n * m)), "float"))


def decomposable_from(s1: KrausSet | None, s2: KrausSet | None) -> MatrixMap:
    """``S1 + S2 o T`` for completely positive ``S1, S2`` given by Kraus sets."""
    ref = s1 if s1 is not None else s2
    if ref is None:
        raise ValueError("at least one Kraus set is required")
    m, n = ref.in_dim, ref.out_dim
    exact = all(s is None or s.exact for s in (s1, s2))
    out = _zero_map(m, n, exact)
    if s1 is not None and not s1.is_empty:
        if (s1.in_dim, s1.out_dim) != (m, n):
            raise ValueError("shape mismatch")
        part = cp_from_kraus(s1)
        out = out + (part if exact else part.to_float())
    if s2 is not None and not s2.is_empty:
        if (s2.in_dim, s2.out_dim) != (m, n):
            raise ValueError("shape mismatch")
        part = compose_transpose(cp_from_kraus(s2))
        out = out + (part if exact else part.to_float())
    return out


def identity_map(d: int) -> MatrixMap:
    eye = [[ONE if a == b else ZERO for b in range(d)] for a in range(d)]
    return cp_from_kraus(KrausSet((eye,)))


def transpose_map(d: int) -> MatrixMap:
    return compose_transpose(identity_map(d))


def positivity_sample(phi: MatrixMap, samples: int, seed: int):
    """Minimum of ``lambda_min(Phi(y y^H))`` over random unit vectors ``y``.

    Vectors are complex normal, normalized, drawn from
    ``numpy.random.default_rng(seed)``.  A negative result certifies that
    ``Phi`` is not positive; a nonnegative one is only evidence.
    Returns ``(minimum, argmin_vector)``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    m, n = phi.in_dim, phi.out_dim
    y = rng.standard_normal((samples, m)) + 1j * rng.standard_normal((samples, m))
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    c = phi.choi.to_numpy().reshape(m, n, m, n)
    imgs = np.einsum("si,sj,iajb->sab", y, y.conj(), c)
    imgs = 0.5 * (imgs + np.conj(np.swapaxes(imgs, 1, 2)))
    mins = np.linalg.eigvalsh(imgs)[:, 0]
    k = int(np.argmin(mins))
    return float(mins[k]), y[k]


def random_kraus(in_dim: int, out_dim: int, count: int, seed: int, bound: int = 3) -> KrausSet:
    """``count`` Kraus operators with Gaussian-integer entries in ``[-bound, bound]``."""
    rng = np.random.default_rng(seed)
    ops = []
    for _ in range(count):
        re = rng.integers(-bound, bound + 1, size=(out_dim, in_dim))
        im = rng.integers(-bound, bound + 1, size=(out_dim, in_dim))
        ops.append(tuple(tuple(GaussQ(int(re[a, i]), int(im[a, i])) for i in range(in_dim))
                         for a in range(out_dim)))
    return KrausSet(tuple(ops), None, in_dim, out_dim)


def random_decomposable(in_dim: int, out_dim: int, seed: int, k1: int | None = None,
                        k2: int | None = None) -> MatrixMap:
    """Exact ``S1 + S2 o T`` from seeded integer Kraus sets.

    ``S1`` defaults to ``in_dim * out_dim`` operators so its Choi matrix is
    generically full rank and the biquadratic form has an interior Gram matrix.
    """
    full = in_dim * out_dim
    s1 = random_kraus(in_dim, out_dim, full if k1 is None else k1, seed)
    s2 = random_kraus(in_dim, out_dim, 2 if k2 is None else k2, seed + 7919)
    return decomposable_from(s1, s2)
