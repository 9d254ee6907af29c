"""Sum-of-squares certification for Hermitian and real polynomials.

Hermitian case.  For a monomial list ``F`` closed under conjugation, a
Hermitian polynomial ``p`` is a sum of squares of Hermitian polynomials over
``F`` iff ``p = sum_ab G[a, b] conj(F_a) F_b`` for a Hermitian ``G >= 0``.
Certificates are reported in the block form ``[[A, B], [conj B, conj A]]``
over ``[m; conj m]`` for a half list ``m``.

The numeric search solves

    maximize  lam  s.t.  G + lam I  represents p,  G >= 0

with the interior point solver.  ``lam* > 0`` gives an interior Gram matrix
(rounded and projected exactly); ``lam*`` near 0 triggers facial reduction
onto the kernel of the numeric solution; ``lam* < 0`` gives a dual moment
functional ``L`` with ``M_L >= 0`` and ``L(p) < 0`` that is rationalized by
mixing in a strictly positive reference functional.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.optimize import linprog

from .linalg import HermitianMatrix, rational_psd_check, solve_linear_exact
from .maps import KrausSet
from .poly import (
    HermitianPolynomial,
    Poly,
    RealPolynomial,
    conj_monomial,
    monomial_product,
    monomial_str,
    realify,
    term_key,
)
from .scalars import GaussQ, ONE, ZERO, as_gauss, format_fraction, round_fraction
from .sdp import SdpProblem, minimize

__all__ = [
    "GramBasis",
    "GramCertificate",
    "RealGramCertificate",
    "MomentCertificate",
    "SosVerdict",
    "candidate_basis",
    "real_candidate_basis",
    "sos_check",
    "real_sos_check",
    "verify_gram",
    "verify_real_gram",
    "verify_moment",
    "sos_to_decomposable",
    "certificate_from_json",
    "gram_feasibility_problem",
]

NUMERIC_MARGIN = 1e-6
ROUNDING_BOUNDS = (10**2, 10**4, 10**6)
FLOAT_VERIFY_TOL = 1e-7


def _real_key(e):
    return (sum(e), tuple(-x for x in e))


# ---------------------------------------------------------------------------
# bases and certificates


class GramBasis:
    """Monomials closed under conjugation, each listed once, in canonical order."""

    __slots__ = ("nvars", "monomials", "_index")

    def __init__(self, nvars: int, monomials):
        ms = []
        seen = set()
        for u, v in monomials:
            m = (tuple(u), tuple(v))
            if len(m[0]) != nvars or len(m[1]) != nvars:
                raise ValueError("monomial length does not match nvars")
            if m in seen:
                raise ValueError(f"duplicate monomial {m}")
            seen.add(m)
            ms.append(m)
        for m in ms:
            if conj_monomial(m) not in seen:
                raise ValueError("basis is not closed under conjugation")
        self.nvars = nvars
        self.monomials = tuple(sorted(ms, key=term_key))
        self._index = {m: i for i, m in enumerate(self.monomials)}

    @classmethod
    def closure(cls, nvars, monomials) -> "GramBasis":
        s = set()
        for u, v in monomials:
            m = (tuple(u), tuple(v))
            s.add(m)
            s.add(conj_monomial(m))
        return cls(nvars, s)

    def half(self) -> tuple:
        """One representative per conjugate pair (self-conjugate ones included)."""
        return tuple(m for m in self.monomials if term_key(m) <= term_key(conj_monomial(m)))

    def index(self, m) -> int:
        return self._index[m]

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __contains__(self, m):
        return m in self._index

    def __eq__(self, other):
        return isinstance(other, GramBasis) and self.monomials == other.monomials

    def __hash__(self):
        return hash(self.monomials)

    def __repr__(self):
        return f"GramBasis(size={len(self)})"

    def describe(self, names) -> list[str]:
        return [monomial_str(m, names) for m in self.monomials]


def _mat_json(rows, exact):
    if exact:
        return [[{"re": format_fraction(v.re), "im": format_fraction(v.im)} for v in r] for r in rows]
    return [[{"re": repr(float(complex(v).real)), "im": repr(float(complex(v).imag))} for v in r]
            for r in rows]


def _mat_from_json(data, exact):
    if exact:
        return [[GaussQ(Fraction(e.get("re", "0")), Fraction(e.get("im", "0"))) for e in r] for r in data]
    return np.array([[complex(float(e.get("re", 0)), float(e.get("im", 0))) for e in r] for r in data],
                    dtype=complex).reshape(len(data), -1 if data else 0)


@dataclass(frozen=True)
class GramCertificate:
    """``p = [m; conj m]^H [[A, B], [conj B, conj A]] [m; conj m]`` with the block matrix PSD.

    ``basis`` is the list ``m``.  ``A`` is Hermitian and ``B`` complex
    symmetric; exact certificates hold GaussQ entries, floating ones numpy
    arrays.
    """

    nvars: int
    basis: tuple
    A: object
    B: object
    regime: str = "exact"

    @property
    def size(self) -> int:
        return len(self.basis)

    def zeta(self) -> list:
        return list(self.basis) + [conj_monomial(m) for m in self.basis]

    def block_matrix(self):
        r = self.size
        if self.regime == "exact":
            A, B = self.A, self.B
            top = [list(A[i]) + list(B[i]) for i in range(r)]
            bot = [[B[i][j].conjugate() for j in range(r)] + [A[i][j].conjugate() for j in range(r)]
                   for i in range(r)]
            return top + bot
        A = np.asarray(self.A, dtype=complex)
        B = np.asarray(self.B, dtype=complex)
        return np.block([[A, B], [B.conj(), A.conj()]]) if r else np.zeros((0, 0), dtype=complex)

    def to_json(self) -> dict:
        exact = self.regime == "exact"
        return {
            "type": "gram",
            "nvars": self.nvars,
            "regime": self.regime,
            "basis": [{"u": list(u), "v": list(v)} for u, v in self.basis],
            "A": _mat_json(self.A, exact),
            "B": _mat_json(self.B, exact),
        }

    @classmethod
    def from_json(cls, data) -> "GramCertificate":
        regime = data.get("regime", "exact")
        basis = tuple((tuple(b["u"]), tuple(b["v"])) for b in data["basis"])
        nvars = int(data.get("nvars", len(basis[0][0]) if basis else 0))
        exact = regime == "exact"
        A = _mat_from_json(data["A"], exact)
        B = _mat_from_json(data["B"], exact)
        return cls(nvars, basis, A, B, regime)


@dataclass(frozen=True)
class RealGramCertificate:
    """``P = b^T Q b`` over real monomials ``b`` with ``Q`` symmetric PSD."""

    nvars: int
    basis: tuple
    Q: object
    regime: str = "exact"

    def to_json(self) -> dict:
        exact = self.regime == "exact"
        fmt = format_fraction if exact else (lambda x: repr(float(x)))
        return {
            "type": "real-gram",
            "nvars": self.nvars,
            "regime": self.regime,
            "basis": [list(e) for e in self.basis],
            "Q": [[fmt(x) for x in row] for row in self.Q],
        }

    @classmethod
    def from_json(cls, data):
        regime = data.get("regime", "exact")
        conv = Fraction if regime == "exact" else float
        basis = tuple(tuple(e) for e in data["basis"])
        Q = [[conv(x) for x in row] for row in data["Q"]]
        if regime != "exact":
            Q = np.array(Q, dtype=float).reshape(len(basis), len(basis))
        return cls(int(data["nvars"]), basis, Q, regime)


@dataclass(frozen=True)
class MomentCertificate:
    """A linear functional ``L`` on monomials with PSD moment matrix and ``L(p) < 0``.

    ``kind == "hermitian"``: the moment matrix is ``M[a, b] = L(conj(F_a) F_b)``
    over the closed basis ``F``; values are complex with ``L(conj w) = conj L(w)``.
    ``kind == "real"``: ``M[a, b] = L(x^(e_a + e_b))``, real values.
    """

    nvars: int
    basis: tuple
    values: dict
    value_on_p: object
    regime: str = "exact"
    kind: str = "hermitian"

    def to_json(self) -> dict:
        exact = self.regime == "exact"
        fmt = format_fraction if exact else (lambda x: repr(float(x)))
        moments = []
        for w, val in self.values.items():
            if self.kind == "hermitian":
                mono = {"u": list(w[0]), "v": list(w[1])}
                g = val if exact else complex(val)
                entry = {"monomial": mono, "value": fmt(g.real if not exact else g.re)}
                im = g.im if exact else g.imag
                if im:
                    entry["im"] = fmt(im)
            else:
                entry = {"monomial": list(w), "value": fmt(val)}
            moments.append(entry)
        basis = ([{"u": list(u), "v": list(v)} for u, v in self.basis] if self.kind == "hermitian"
                 else [list(e) for e in self.basis])
        vp = self.value_on_p
        return {
            "type": "moment",
            "kind": self.kind,
            "nvars": self.nvars,
            "regime": self.regime,
            "basis": basis,
            "moments": moments,
            "value_on_p": fmt(vp),
        }

    @classmethod
    def from_json(cls, data) -> "MomentCertificate":
        regime = data.get("regime", "exact")
        kind = data.get("kind", "hermitian")
        exact = regime == "exact"
        conv = Fraction if exact else float
        values = {}
        for m in data["moments"]:
            if kind == "hermitian":
                w = (tuple(m["monomial"]["u"]), tuple(m["monomial"]["v"]))
                re, im = conv(m["value"]), conv(m.get("im", "0"))
                values[w] = GaussQ(re, im) if exact else complex(re, im)
            else:
                values[tuple(m["monomial"])] = conv(m["value"])
        if kind == "hermitian":
            basis = tuple((tuple(b["u"]), tuple(b["v"])) for b in data["basis"])
        else:
            basis = tuple(tuple(e) for e in data["basis"])
        return cls(int(data["nvars"]), basis, values, conv(data["value_on_p"]), regime, kind)


def certificate_from_json(data):
    t = data.get("type")
    if t == "gram":
        return GramCertificate.from_json(data)
    if t == "real-gram":
        return RealGramCertificate.from_json(data)
    if t == "moment":
        return MomentCertificate.from_json(data)
    raise ValueError(f"unknown certificate type {t!r}")


@dataclass
class SosVerdict:
    status: str  # "sos", "not_sos", "indeterminate"
    certificate: object = None
    margins: dict = field(default_factory=dict)
    basis: object = None
    method: str = ""

    @property
    def is_sos(self):
        return self.status == "sos"

    @property
    def is_not_sos(self):
        return self.status == "not_sos"


# ---------------------------------------------------------------------------
# verification


def _gram_expand(cert: GramCertificate):
    z = cert.zeta()
    G = cert.block_matrix()
    exact = cert.regime == "exact"
    acc: dict = {}
    for a, za in enumerate(z):
        ca = conj_monomial(za)
        for b, zb in enumerate(z):
            g = G[a][b] if exact else G[a, b]
            if not g:
                continue
            w = monomial_product(ca, zb)
            acc[w] = acc.get(w, ZERO if exact else 0j) + g
    return acc


def verify_gram(p: Poly, cert: GramCertificate) -> bool:
    """Coefficient identity plus block PSD; exact for exact certificates.

    Floating certificates are accepted within ``1e-7`` relative tolerance
    (coefficients) and eigenvalues ``>= -1e-7 * scale``.
    """
    if cert.nvars != p.nvars:
        raise ValueError("certificate and polynomial have different variable counts")
    if cert.regime == "exact" and p.regime != "exact":
        raise TypeError("exact certificate against a floating polynomial")
    r = cert.size
    exact = cert.regime == "exact"
    if exact:
        for i in range(r):
            for j in range(r):
                if cert.A[i][j] != cert.A[j][i].conjugate() or cert.B[i][j] != cert.B[j][i]:
                    return False
    else:
        A = np.asarray(cert.A)
        B = np.asarray(cert.B)
        if r and (np.abs(A - A.conj().T).max() > 1e-9 or np.abs(B - B.T).max() > 1e-9):
            return False
    acc = _gram_expand(cert)
    keys = set(acc) | set(p.terms)
    if exact:
        for w in keys:
            if acc.get(w, ZERO) != p.terms.get(w, ZERO):
                return False
        if r == 0:
            return True
        return rational_psd_check(cert.block_matrix()).is_psd
    scale = max([abs(complex(c)) for c in p.terms.values()] + [1e-300])
    for w in keys:
        if abs(complex(acc.get(w, 0)) - complex(p.terms.get(w, 0))) > FLOAT_VERIFY_TOL * scale:
            return False
    if r == 0:
        return True
    ev = np.linalg.eigvalsh(cert.block_matrix())
    return bool(ev[0] >= -FLOAT_VERIFY_TOL * scale)


def verify_real_gram(P: RealPolynomial, cert: RealGramCertificate) -> bool:
    exact = cert.regime == "exact"
    acc: dict = {}
    b = cert.basis
    for i, ei in enumerate(b):
        for j, ej in enumerate(b):
            q = cert.Q[i][j]
            if q:
                e = tuple(x + y for x, y in zip(ei, ej))
                acc[e] = acc.get(e, 0) + q
    keys = set(acc) | set(P.terms)
    if exact:
        for i in range(len(b)):
            for j in range(len(b)):
                if cert.Q[i][j] != cert.Q[j][i]:
                    return False
        if any(acc.get(e, 0) != P.terms.get(e, 0) for e in keys):
            return False
        if not b:
            return True
        return rational_psd_check(cert.Q).is_psd
    scale = max([abs(float(c)) for c in P.terms.values()] + [1e-300])
    if any(abs(float(acc.get(e, 0)) - float(P.terms.get(e, 0))) > FLOAT_VERIFY_TOL * scale for e in keys):
        return False
    if not b:
        return True
    Q = np.asarray(cert.Q, dtype=float)
    return bool(np.linalg.eigvalsh(0.5 * (Q + Q.T))[0] >= -FLOAT_VERIFY_TOL * scale)


def verify_moment(p, cert: MomentCertificate) -> bool:
    """``M_L >= 0`` and ``L(p) == value_on_p < 0``; exact for exact certificates.

    Raises ``ValueError`` when the functional misses a monomial it must
    define (a moment-matrix entry or a term of ``p``).
    """
    exact = cert.regime == "exact"
    herm = cert.kind == "hermitian"
    if exact and p.regime != "exact":
        raise TypeError("exact certificate against a floating polynomial")
    vals = cert.values
    F = cert.basis
    n = len(F)

    def look(w):
        if w not in vals:
            raise ValueError(f"functional has no value for monomial {w}")
        return vals[w]

    if herm:
        for w, v in vals.items():
            cw = conj_monomial(w)
            if cw in vals:
                other = vals[cw]
                ok = (v == other.conjugate()) if exact else abs(complex(v) - complex(other).conjugate()) < 1e-9
                if not ok:
                    return False
        rows = [[look(monomial_product(conj_monomial(F[a]), F[b])) for b in range(n)] for a in range(n)]
        total = ZERO if exact else 0j
        for w, c in p.terms.items():
            total = total + c * look(w)
        if exact:
            if total.im:
                return False
            lp = total.re
        else:
            if abs(total.imag) > 1e-8 * max(1.0, abs(total)):
                return False
            lp = total.real
    else:
        rows = [[look(tuple(x + y for x, y in zip(F[a], F[b]))) for b in range(n)] for a in range(n)]
        lp = sum((c * look(e) for e, c in p.terms.items()), Fraction(0) if exact else 0.0)
    if exact:
        if lp != cert.value_on_p or not lp < 0:
            return False
        if n == 0:
            return True
        try:
            return rational_psd_check(rows).is_psd
        except ValueError:
            return False
    if not lp < 0 or abs(lp - float(cert.value_on_p)) > 1e-8 * max(1.0, abs(lp)):
        return False
    if n == 0:
        return True
    M = np.array(rows, dtype=complex)
    if np.abs(M - M.conj().T).max() > 1e-9:
        return False
    ev = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
    # the functional must be nonnegative on squares with margin comparable to L(p)
    return bool(ev[0] >= -FLOAT_VERIFY_TOL * abs(lp))


# ---------------------------------------------------------------------------
# candidate bases


def _in_hull(points: np.ndarray, target: np.ndarray) -> bool:
    """Is ``target`` in conv(points)?  LP feasibility (superset-leaning at solver tolerance)."""
    k = points.shape[0]
    if k == 0:
        return False
    diff = np.abs(points - target).sum(axis=1)
    if np.any(diff == 0):
        return True
    a_eq = np.vstack([points.T, np.ones((1, k))])
    b_eq = np.concatenate([target, [1.0]])
    res = linprog(np.zeros(k), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * k, method="highs")
    return res.status == 0


def _half_newton_points(points: np.ndarray) -> list[tuple]:
    """Integer ``d`` with ``2d`` in the convex hull of ``points``."""
    if points.shape[0] == 0:
        return []
    lo = np.ceil(points.min(axis=0) / 2).astype(int)
    hi = np.floor(points.max(axis=0) / 2).astype(int)
    out = []
    for d in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        if _in_hull(points, 2 * np.array(d, dtype=float)):
            out.append(tuple(int(x) for x in d))
    return out


def _eliminate(members: set, product, coeff_zero, conj) -> set:
    """Drop whole diagonal classes that can only hold diagonal Gram entries and
    whose coefficient in the target is zero; repeat to a fixed point."""
    cur = set(members)
    changed = True
    while changed:
        changed = False
        classes: dict = {}
        for a in cur:
            for b in cur:
                classes.setdefault(product(a, b), []).append((a, b))
        for a in sorted(cur, key=str):
            if a not in cur:
                continue
            w = product(a, a)
            if not coeff_zero(w):
                continue
            entries = classes.get(w, [])
            if all(x == y for x, y in entries):
                drop = {x for x, _ in entries}
                cur -= drop
                changed = True
                break
    return cur


def candidate_basis(p: Poly) -> GramBasis:
    """Monomials that can occur in a Hermitian SOS decomposition of ``p``.

    Start from ``z^u conj(z)^v`` whose per-variable degree ``u + v`` lies in
    half the (projected) Newton polytope of ``realify(p)`` and whose diagonal
    square ``(u+v, u+v)`` sits in the coordinate box of ``supp p``; then
    repeatedly remove diagonal classes with zero coefficient that no
    off-diagonal product can reach.
    """
    n = p.nvars
    if p.is_zero():
        return GramBasis(n, [])
    P = realify(p)
    pts = np.array([[e[i] + e[n + i] for i in range(n)] for e in P.terms], dtype=float)
    if pts.size == 0:
        return GramBasis(n, [])
    us = np.array([u for u, _ in p.terms], dtype=int)
    vs = np.array([v for _, v in p.terms], dtype=int)
    box_lo = np.maximum(us.min(axis=0), vs.min(axis=0))
    box_hi = np.minimum(us.max(axis=0), vs.max(axis=0))
    members = set()
    for d in _half_newton_points(pts):
        if any(d[i] < box_lo[i] or d[i] > box_hi[i] for i in range(n)):
            continue
        for u in itertools.product(*[range(x + 1) for x in d]):
            v = tuple(x - y for x, y in zip(d, u))
            members.add((tuple(u), v))

    def product(a, b):
        return monomial_product(conj_monomial(a), b)

    def coeff_zero(w):
        return w not in p.terms

    cur = _eliminate(members, product, coeff_zero, conj_monomial)
    return GramBasis(n, cur)


def real_candidate_basis(P: RealPolynomial) -> tuple:
    if not P.terms:
        return ()
    pts = np.array(list(P.terms), dtype=float)
    members = set(_half_newton_points(pts))

    def product(a, b):
        return tuple(x + y for x, y in zip(a, b))

    cur = _eliminate(members, product, lambda e: e not in P.terms, lambda e: e)
    return tuple(sorted(cur, key=_real_key))


# ---------------------------------------------------------------------------
# the Gram system


class _GramSystem:
    """Entry classes of a Gram matrix over ``F`` and the matching SDP data."""

    def __init__(self, F, product, conj, targets: dict, zero, complex_data: bool):
        self.F = list(F)
        N = self.N = len(F)
        self.product = product
        self.conj = conj
        self.zero = zero
        classes: dict = {}
        for a in range(N):
            for b in range(N):
                classes.setdefault(product(F[a], F[b]), []).append((a, b))
        self.classes = classes
        self.targets = targets
        self.outside = [w for w in targets if w not in classes]
        self.complex = complex_data
        reps = []
        for w in classes:
            cw = conj(w)
            if cw == w or cw not in classes or _label_key(w) < _label_key(cw):
                reps.append(w)
        self.reps = sorted(reps, key=_label_key)

    def target(self, w):
        return self.targets.get(w, self.zero)

    def diag_count(self, w):
        return sum(1 for a, b in self.classes[w] if a == b)

    def least_norm_representation(self) -> np.ndarray:
        N = self.N
        G = np.zeros((N, N), dtype=complex if self.complex else float)
        for w, entries in self.classes.items():
            t = complex(self.target(w))
            val = t / len(entries)
            for a, b in entries:
                G[a, b] = val if self.complex else val.real
        return G

    def build_sdp(self, shift: float, scale: float):
        """Operator rows for ``diag(G, lam')`` with ``G + (lam' - shift) I`` representing ``p/scale``."""
        N = self.N
        D = N + 1
        rows, cols, vals = [], [], []
        rhs = []
        i = 0
        for w in self.reps:
            entries = self.classes[w]
            t = complex(self.target(w)) / scale
            self_conj = self.conj(w) == w
            # real part: sum over class of Re G
            for a, b in entries:
                rows += [i, i]
                cols += [a * D + b, b * D + a]
                vals += [0.5, 0.5]
            tw = self.diag_count(w)
            if tw:
                rows.append(i)
                cols.append(N * D + N)
                vals.append(float(tw))
            rhs.append(t.real + tw * shift)
            i += 1
            if self.complex and not self_conj:
                for a, b in entries:
                    rows += [i, i]
                    cols += [b * D + a, a * D + b]
                    vals += [-0.5j, 0.5j]
                rhs.append(t.imag)
                i += 1
        dtype = complex if self.complex else float
        op = sp.csr_matrix((np.array(vals, dtype=dtype), (rows, cols)), shape=(i, D * D))
        op.sum_duplicates()
        C = sp.csr_matrix(([-1.0], ([N], [N])), shape=(D, D))
        return SdpProblem.from_operator(D, op, np.array(rhs), C)

    def functional_from_matrix(self, M: np.ndarray) -> dict:
        out = {}
        for w, entries in self.classes.items():
            vals = [M[a, b] for a, b in entries]
            out[w] = complex(np.mean(vals)) if self.complex else float(np.real(np.mean(vals)))
        return out


def _label_key(w):
    if isinstance(w[0], tuple):
        return term_key(w)
    return _real_key(w)


@dataclass
class _NumericResult:
    lam: float
    G: np.ndarray  # numeric Gram representing p (scaled back), = G_ipm + lam I
    G_face: np.ndarray  # G_ipm (PSD part)
    M: np.ndarray  # trace-one moment matrix
    L: dict
    margins: dict


def _solve_numeric(sysm: _GramSystem, tol: float, seed: int) -> _NumericResult:
    scale = max([abs(complex(c)) for c in sysm.targets.values()] + [1e-300])
    G0 = sysm.least_norm_representation() / scale
    ev = np.linalg.eigvalsh(G0) if sysm.N else np.array([0.0])
    c0 = max(0.0, -float(ev[0]))
    shift = c0 + 1.0
    prob = sysm.build_sdp(shift, scale)
    out = minimize(prob, tol=tol, seed=seed)
    N = sysm.N
    X = out.X
    lam = float(np.real(X[N, N])) - shift
    Gi = X[:N, :N]
    y = out.y
    S = -(prob.operator().T @ y).reshape(N + 1, N + 1)
    M = S[:N, :N]
    tr = float(np.real(np.trace(M)))
    if tr > 0:
        M = M / tr
    L = sysm.functional_from_matrix(M)
    margins = dict(out.margins)
    margins.update({"lambda": lam * scale, "lambda_scaled": lam, "status": out.status,
                    "iterations": out.iterations, "scale": scale})
    G = (Gi + lam * np.eye(N)) * scale
    return _NumericResult(lam, G, Gi * scale, M, L, margins)


# ---- exact rationalization helpers -------------------------------------------


def _round_entry(x, bound, complex_mode):
    if complex_mode:
        z = complex(x)
        return GaussQ(round_fraction(z.real, bound), round_fraction(z.imag, bound))
    return GaussQ(round_fraction(float(np.real(x)), bound), 0)


def _project_classes(sysm: _GramSystem, G: list) -> None:
    """Exact orthogonal projection onto the class-sum constraints (in place)."""
    for w in sysm.reps:
        entries = sysm.classes[w]
        s = ZERO
        for a, b in entries:
            s = s + G[a][b]
        delta = as_gauss(sysm.target(w)) - s
        if not delta:
            continue
        step = delta / len(entries)
        self_conj = sysm.conj(w) == w
        for a, b in entries:
            G[a][b] = G[a][b] + step
            if not self_conj:
                G[b][a] = G[b][a] + step.conjugate()


def _exact_class_ok(sysm: _GramSystem, G: list) -> bool:
    for w, entries in sysm.classes.items():
        s = ZERO
        for a, b in entries:
            s = s + G[a][b]
        if s != as_gauss(sysm.target(w)):
            return False
    return True


def _rationalize_interior(sysm: _GramSystem, G: np.ndarray):
    N = sysm.N
    for bound in ROUNDING_BOUNDS:
        R = [[ZERO] * N for _ in range(N)]
        for a in range(N):
            for b in range(a, N):
                v = _round_entry(G[a, b], bound, sysm.complex)
                if a == b:
                    v = GaussQ(v.re, 0)
                R[a][b] = v
                R[b][a] = v.conjugate()
        _project_classes(sysm, R)
        if rational_psd_check(R).is_psd:
            return R, bound
    return None, None


def _numeric_rref(K: np.ndarray, tol=1e-9):
    """Rows spanning the column space of K^T in reduced echelon form."""
    kt = K.T
    _, _, piv = sla.qr(kt, pivoting=True)
    k = kt.shape[0]
    cols = np.sort(piv[:k])
    sub = kt[:, cols]
    return np.linalg.solve(sub, kt), cols


def _facial_reduction(sysm: _GramSystem, G: np.ndarray, max_params: int = 500):
    """Exact certificate on the face ``G = V S V^H`` cut out by the numeric kernel."""
    N = sysm.N
    w, U = np.linalg.eigh(0.5 * (G + G.conj().T))
    wmax = max(float(w[-1]), 1e-300)
    small = [j for j in range(N) if w[j] < 1e-5 * wmax]
    if not small:
        return None
    # kernel dimension: largest relative gap inside the small region
    ratios = [(w[j + 1] / max(abs(w[j]), 1e-300), j) for j in small if j + 1 < N]
    if not ratios:
        return None
    _, jstar = max(ratios)
    k = jstar + 1
    s = N - k
    if s * s > max_params:
        return None
    K = U[:, :k]
    Rn, pcols = _numeric_rref(K)
    for bound in ROUNDING_BOUNDS:
        R = [[_round_entry(Rn[i, j], bound, sysm.complex) for j in range(N)] for i in range(k)]
        for i, c in enumerate(pcols):
            for i2 in range(k):
                R[i2][c] = ONE if i2 == i else ZERO
        conjR = [[x.conjugate() for x in row] for row in R]
        ker = solve_linear_exact(conjR).kernel
        if len(ker) != s:
            continue
        V = [[ker[j][a] for j in range(s)] for a in range(N)]  # N x s
        cert = _solve_face(sysm, G, V)
        if cert is not None:
            return cert, bound, k
    return None


def _solve_face(sysm: _GramSystem, G: np.ndarray, V: list):
    N = sysm.N
    s = len(V[0]) if V else 0
    cplx = sysm.complex
    # real parameters of a Hermitian (or real symmetric) s x s matrix
    params = []
    for i in range(s):
        params.append((i, i, "d"))
        for j in range(i + 1, s):
            params.append((i, j, "re"))
            if cplx:
                params.append((i, j, "im"))

    def basis_matrix(p):
        i, j, kind = p
        if kind == "d":
            return {(i, i): ONE}
        if kind == "re":
            return {(i, j): ONE, (j, i): ONE}
        return {(i, j): GaussQ(0, 1), (j, i): GaussQ(0, -1)}

    Vc = [[x.conjugate() for x in row] for row in V]
    # class sums of V E V^H for each parameter
    rows_re, rows_im, rhs_re, rhs_im = [], [], [], []
    contrib_cache = []
    for p in params:
        E = basis_matrix(p)
        contrib = {}
        for w in sysm.reps:
            tot = ZERO
            for a, b in sysm.classes[w]:
                for (i, j), e in E.items():
                    if V[a][i] and Vc[b][j]:
                        tot = tot + V[a][i] * e * Vc[b][j]
            contrib[w] = tot
        contrib_cache.append(contrib)
    A_rows = []
    rhs = []
    for w in sysm.reps:
        t = as_gauss(sysm.target(w))
        A_rows.append([GaussQ(c[w].re, 0) for c in contrib_cache])
        rhs.append(GaussQ(t.re, 0))
        if cplx and sysm.conj(w) != w:
            A_rows.append([GaussQ(c[w].im, 0) for c in contrib_cache])
            rhs.append(GaussQ(t.im, 0))
    # numeric S from least squares on V
    Vf = np.array([[complex(x) for x in row] for row in V], dtype=complex)
    Vp = np.linalg.pinv(Vf)
    Sn = Vp @ G @ Vp.conj().T
    for bound in ROUNDING_BOUNDS:
        x0 = []
        for (i, j, kind) in params:
            if kind == "d":
                x0.append(GaussQ(round_fraction(float(Sn[i, i].real), bound)))
            elif kind == "re":
                x0.append(GaussQ(round_fraction(float(Sn[i, j].real), bound)))
            else:
                x0.append(GaussQ(round_fraction(float(Sn[i, j].imag), bound)))
        # least-norm correction x = x0 + A^T z with (A A^T) z = rhs - A x0
        resid = []
        for row, b in zip(A_rows, rhs):
            acc = b
            for a, x in zip(row, x0):
                if a and x:
                    acc = acc - a * x
            resid.append(acc)
        if any(resid):
            m = len(A_rows)
            AAt = [[sum((A_rows[i][t] * A_rows[j][t] for t in range(len(params)) if A_rows[i][t] and A_rows[j][t]), ZERO)
                    for j in range(m)] for i in range(m)]
            sol = solve_linear_exact(AAt, resid)
            if not sol.consistent:
                return None
            z = sol.particular
            x = list(x0)
            for i in range(m):
                if z[i]:
                    for t in range(len(params)):
                        if A_rows[i][t]:
                            x[t] = x[t] + A_rows[i][t] * z[i]
        else:
            x = x0
        S = [[ZERO] * s for _ in range(s)]
        for val, p in zip(x, params):
            for (i, j), e in basis_matrix(p).items():
                S[i][j] = S[i][j] + e * val
        if not rational_psd_check(S).is_psd:
            continue
        # G = V S V^H
        VS = [[sum((V[a][i] * S[i][j] for i in range(s) if V[a][i] and S[i][j]), ZERO) for j in range(s)]
              for a in range(N)]
        Gx = [[sum((VS[a][j] * Vc[b][j] for j in range(s) if VS[a][j] and Vc[b][j]), ZERO) for b in range(N)]
              for a in range(N)]
        if _exact_class_ok(sysm, Gx):
            return Gx
    return None


def _reference_functional(F, complex_mode: bool, hermitian: bool):
    """Gaussian moments; the moment matrix over distinct monomials is PD."""
    def herm_moment(w):
        u, v = w
        if u != v:
            return Fraction(0)
        return Fraction(math.prod(math.factorial(x) for x in u))

    def real_moment(e):
        if any(x % 2 for x in e):
            return Fraction(0)
        return Fraction(math.prod(_double_fact(x - 1) for x in e))

    return herm_moment if hermitian else real_moment


def _double_fact(k):
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def _rationalize_moment(sysm: _GramSystem, num: _NumericResult, hermitian: bool, real_coeffs: bool):
    """Mix the numeric dual with a positive reference functional and round."""
    F = sysm.F
    ref = _reference_functional(F, sysm.complex, hermitian)
    L0 = {w: ref(w) for w in sysm.classes}
    tr0 = sum(L0[sysm.product(f, f)] for f in F)
    if tr0 <= 0:
        return None
    L0 = {w: v / tr0 for w, v in L0.items()}
    scale = num.margins["scale"]
    lam = num.lam  # L*(p / scale) on the trace-one functional
    L0p = sum(complex(c) * float(L0.get(w, 0)) for w, c in sysm.targets.items()).real / scale
    if lam >= 0:
        return None
    ts = []
    t = abs(lam) / (2 * (abs(lam) + abs(L0p)))
    for k in range(4):
        ts.append(t / (4 ** k))
    for t in ts:
        for bound in ROUNDING_BOUNDS + (10**8, 10**10):
            vals = {}
            for w in sysm.reps:
                v = (1 - t) * num.L[w] + t * float(L0[w])
                if real_coeffs or not sysm.complex:
                    g = GaussQ(round_fraction(float(np.real(v)), bound), 0)
                else:
                    g = GaussQ(round_fraction(complex(v).real, bound), round_fraction(complex(v).imag, bound))
                if sysm.conj(w) == w:
                    g = GaussQ(g.re, 0)
                vals[w] = g
                vals[sysm.conj(w)] = g.conjugate()
            lp = ZERO
            for w, c in sysm.targets.items():
                lp = lp + as_gauss(c) * vals[w]
            if lp.im or not lp.re < 0:
                continue
            M = [[vals[sysm.product(F[a], F[b])] for b in range(len(F))] for a in range(len(F))]
            if rational_psd_check(M).is_psd:
                return vals, lp.re
    return None


# ---------------------------------------------------------------------------
# certificate assembly


def _gram_to_cert(nvars, basis: GramBasis, G, exact: bool) -> GramCertificate:
    """Convert a Gram matrix over the closed list to block form over the half list."""
    F = basis.monomials
    half = basis.half()
    r = len(half)
    pos = {m: i for i, m in enumerate(half)}
    # S maps zeta' = [m; conj m] coordinates to F coordinates
    S = []
    for f in F:
        row = {}
        if f in pos and conj_monomial(f) == f:
            row[pos[f]] = Fraction(1, 2)
            row[r + pos[f]] = Fraction(1, 2)
        elif f in pos:
            row[pos[f]] = 1
        else:
            row[r + pos[conj_monomial(f)]] = 1
        S.append(row)
    n2 = 2 * r
    N = len(F)
    if exact:
        P = [[ZERO] * n2 for _ in range(n2)]
        for a in range(N):
            for b in range(N):
                g = G[a][b]
                if not g:
                    continue
                for i, si in S[a].items():
                    for j, sj in S[b].items():
                        P[i][j] = P[i][j] + g * (as_gauss(si) * as_gauss(sj))
        half_ = Fraction(1, 2)
        A = [[(P[i][j] + P[r + i][r + j].conjugate()) * half_ for j in range(r)] for i in range(r)]
        B = [[(P[i][r + j] + P[r + i][j].conjugate()) * half_ for j in range(r)] for i in range(r)]
        return GramCertificate(nvars, tuple(half), A, B, "exact")
    Sm = np.zeros((N, n2))
    for a, row in enumerate(S):
        for i, v in row.items():
            Sm[a, i] = float(v)
    P = Sm.T @ np.asarray(G, dtype=complex) @ Sm
    A = 0.5 * (P[:r, :r] + P[r:, r:].conj())
    B = 0.5 * (P[:r, r:] + P[r:, :r].conj())
    return GramCertificate(nvars, tuple(half), A, B, "float")


def _moment_cert_from(sysm, vals, lp, nvars, exact, kind):
    return MomentCertificate(nvars, tuple(sysm.F), dict(vals), lp, "exact" if exact else "float", kind)


def _outside_refutation(sysm: _GramSystem, nvars, exact, kind):
    """``p`` has a monomial no Gram entry produces: refute with ``L(w) = -conj(p_w)`` there."""
    vals = {}
    for w in sysm.classes:
        vals[w] = ZERO if exact else (0j if kind == "hermitian" else 0.0)
    lp = Fraction(0) if exact else 0.0
    for w in sysm.outside:
        c = sysm.targets[w]
        if kind == "hermitian":
            v = -(as_gauss(c).conjugate() if exact else complex(c).conjugate())
            vals[w] = v
            lp = lp + (as_gauss(c) * v).re if exact else lp + (complex(c) * v).real
        else:
            v = -c
            vals[w] = v
            lp = lp + c * v
    return MomentCertificate(nvars, tuple(sysm.F), vals, lp, "exact" if exact else "float", kind)


# ---------------------------------------------------------------------------
# public checks


def _coerce_basis(p, basis) -> GramBasis:
    if basis is None:
        return candidate_basis(p)
    if isinstance(basis, GramBasis):
        b = basis
    else:
        b = GramBasis.closure(p.nvars, basis)
    if b.nvars != p.nvars:
        raise ValueError("basis and polynomial have different variable counts")
    return b


def sos_check(p: Poly, basis=None, mode: str = "exact", tol: float = 1e-9, seed: int = 0) -> SosVerdict:
    """Decide whether ``p`` is a sum of squares of Hermitian polynomials over ``basis``.

    ``basis`` may be a :class:`GramBasis`, any list of monomials (closed under
    conjugation here), or ``None`` for :func:`candidate_basis`.  In exact mode
    every returned certificate is rational and has passed
    :func:`verify_gram` / :func:`verify_moment`.
    """
    if mode not in ("exact", "numeric"):
        raise ValueError("mode must be 'exact' or 'numeric'")
    exact = mode == "exact"
    if exact and p.regime != "exact":
        raise TypeError("exact mode needs an exact polynomial")
    gb = _coerce_basis(p, basis)
    n = p.nvars
    real_coeffs = all(complex(c).imag == 0 for c in p.terms.values())
    zero = ZERO if exact else 0j
    targets = {w: (c if exact else complex(c)) for w, c in p.terms.items()}

    def product(a, b):
        return monomial_product(conj_monomial(a), b)

    sysm = _GramSystem(gb.monomials, product, conj_monomial, targets, zero, complex_data=not real_coeffs)
    sysm.poly = p
    if sysm.outside:
        cert = _outside_refutation(sysm, n, exact, "hermitian")
        return SosVerdict("not_sos", cert, {"outside_monomials": len(sysm.outside)}, gb, "support")
    if not p.terms:
        cert = GramCertificate(n, gb.half(), *_zero_blocks(len(gb.half()), exact), "exact" if exact else "float")
        return SosVerdict("sos", cert, {}, gb, "trivial")
    num = _solve_numeric(sysm, tol, seed)
    return _finish(sysm, num, gb, n, exact, real_coeffs, "hermitian")


def _zero_blocks(r, exact):
    if exact:
        return [[ZERO] * r for _ in range(r)], [[ZERO] * r for _ in range(r)]
    return np.zeros((r, r), dtype=complex), np.zeros((r, r), dtype=complex)


def _finish(sysm, num, gb, n, exact, real_coeffs, kind):
    lam = num.lam
    margins = num.margins
    hermitian = kind == "hermitian"

    def gram_cert(G, is_exact):
        if hermitian:
            return _gram_to_cert(n, gb, G, is_exact)
        Q = G if is_exact else np.real(np.asarray(G))
        if is_exact:
            Q = [[g.re for g in row] for row in G]
        return RealGramCertificate(n, tuple(sysm.F), Q, "exact" if is_exact else "float")

    def verify(cert, target):
        if isinstance(cert, GramCertificate):
            return verify_gram(target, cert)
        if isinstance(cert, RealGramCertificate):
            return verify_real_gram(target, cert)
        return verify_moment(target, cert)

    target = sysm.poly
    if not exact:
        if lam >= -FLOAT_VERIFY_TOL:
            G = num.G_face + max(lam, 0.0) * np.eye(sysm.N) * margins["scale"]
            cert = gram_cert(G, False)
            if verify(cert, target):
                return SosVerdict("sos", cert, margins, gb, "numeric")
        if lam <= -NUMERIC_MARGIN:
            L = dict(num.L)
            vals = {w: L[w] for w in sysm.classes}
            lp = sum(complex(c) * complex(vals[w]) for w, c in sysm.targets.items()).real
            if not hermitian:
                vals = {w: float(np.real(v)) for w, v in vals.items()}
            cert = MomentCertificate(n, tuple(sysm.F), vals, lp, "float", kind)
            if verify(cert, target):
                return SosVerdict("not_sos", cert, margins, gb, "numeric")
        return SosVerdict("indeterminate", None, margins, gb, "numeric")
    # exact mode
    if lam > 1e-9:
        R, bound = _rationalize_interior(sysm, num.G)
        if R is not None:
            cert = gram_cert(R, True)
            if verify(cert, target):
                margins["rounding_bound"] = bound
                return SosVerdict("sos", cert, margins, gb, "interior-rounding")
    if lam < 0:
        res = _rationalize_moment(sysm, num, hermitian, real_coeffs)
        if res is not None:
            vals, lp = res
            if not hermitian:
                vals = {w: v.re for w, v in vals.items()}
            cert = MomentCertificate(n, tuple(sysm.F), vals, lp, "exact", kind)
            if verify(cert, target):
                return SosVerdict("not_sos", cert, margins, gb, "moment-rounding")
    if lam >= -NUMERIC_MARGIN:
        res = _facial_reduction(sysm, num.G_face)
        if res is not None:
            Gx, bound, k = res
            cert = gram_cert(Gx, True)
            if verify(cert, target):
                margins.update({"rounding_bound": bound, "face_kernel_dim": k})
                return SosVerdict("sos", cert, margins, gb, "facial-reduction")
    return SosVerdict("indeterminate", None, margins, gb, "exact")


def real_sos_check(P: RealPolynomial, basis=None, mode: str = "exact", tol: float = 1e-9,
                   seed: int = 0) -> SosVerdict:
    """Real SOS over the halved Newton polytope (or the given exponent list)."""
    if mode not in ("exact", "numeric"):
        raise ValueError("mode must be 'exact' or 'numeric'")
    exact = mode == "exact"
    if exact and P.regime != "exact":
        raise TypeError("exact mode needs an exact polynomial")
    F = tuple(tuple(e) for e in basis) if basis is not None else real_candidate_basis(P)
    F = tuple(sorted(set(F), key=_real_key))
    targets = {e: (GaussQ(c) if exact else complex(float(c))) for e, c in P.terms.items()}

    def product(a, b):
        return tuple(x + y for x, y in zip(a, b))

    sysm = _GramSystem(F, product, lambda e: e, targets, ZERO if exact else 0j, complex_data=False)
    sysm.poly = P
    if sysm.outside:
        cert = _outside_refutation(sysm, P.nvars, exact, "real")
        return SosVerdict("not_sos", cert, {"outside_monomials": len(sysm.outside)}, F, "support")
    if not P.terms:
        Q = [[Fraction(0)] * len(F) for _ in F] if exact else np.zeros((len(F), len(F)))
        return SosVerdict("sos", RealGramCertificate(P.nvars, F, Q, mode if exact else "float"), {}, F, "trivial")
    num = _solve_numeric(sysm, tol, seed)
    return _finish(sysm, num, F, P.nvars, exact, True, "real")


def gram_feasibility_problem(p: Poly, basis=None) -> SdpProblem:
    """The plain Gram feasibility SDP: ``G >= 0`` with class sums equal to ``p``.

    Monomials of ``p`` outside every class make the problem trivially
    inconsistent; they are added as constraints with a zero matrix.
    """
    gb = _coerce_basis(p, basis)
    F = gb.monomials
    N = len(F)
    targets = {w: complex(c) for w, c in p.terms.items()}

    def product(a, b):
        return monomial_product(conj_monomial(a), b)

    real_coeffs = all(c.imag == 0 for c in targets.values())
    sysm = _GramSystem(F, product, conj_monomial, targets, 0j, complex_data=not real_coeffs)
    rows, cols, vals, rhs = [], [], [], []
    i = 0
    for w in sysm.reps:
        t = sysm.target(w)
        for a, b in sysm.classes[w]:
            rows += [i, i]
            cols += [a * N + b, b * N + a]
            vals += [0.5, 0.5]
        rhs.append(t.real)
        i += 1
        if sysm.complex and conj_monomial(w) != w:
            for a, b in sysm.classes[w]:
                rows += [i, i]
                cols += [b * N + a, a * N + b]
                vals += [-0.5j, 0.5j]
            rhs.append(t.imag)
            i += 1
    for w in sysm.outside:
        rhs.append(abs(sysm.target(w)))
        i += 1
    dtype = complex if sysm.complex else float
    op = sp.csr_matrix((np.array(vals, dtype=dtype), (rows, cols)), shape=(i, N * N))
    op.sum_duplicates()
    return SdpProblem.from_operator(N, op, np.array(rhs, dtype=float))


# ---------------------------------------------------------------------------
# Kraus extraction


def _exact_ldl(H):
    """``H = sum_t d_t l_t l_t^H`` exactly for a PSD ``H`` (None if not PSD)."""
    wit = rational_psd_check(H)
    if not wit.is_psd:
        return None
    cols = [[wit.L[i][k] for i in range(len(H))] for k in range(len(wit.d))]
    return list(zip(wit.d, cols))


def sos_to_decomposable(p: HermitianPolynomial, cert: GramCertificate, orientation: str = "input_first"):
    """Read a decomposition ``S1 + S2 o T`` off a Gram certificate of a biquadratic form.

    ``p(x, y) = y^H Phi(x x^H) y`` with ``x`` the input block (``orientation``
    says which of p's two blocks that is).  The Gram entries on ``x_i y_k`` and
    their conjugates give the transposed branch, those on ``x_i conj(y_k)``
    and conjugates the direct branch.  Weights stay rational, so the exact
    round trip needs no square roots.
    """
    if len(p.blocks) != 2:
        raise ValueError("polynomial needs exactly two variable blocks")
    exact = cert.regime == "exact"
    if not verify_gram(p, cert):
        raise ValueError("certificate does not verify for this polynomial")
    b0, b1 = p.blocks[0][1], p.blocks[1][1]
    in_idx, out_idx = (b0, b1) if orientation == "input_first" else (b1, b0)
    m, n = len(in_idx), len(out_idx)
    pin = {g: i for i, g in enumerate(in_idx)}
    pout = {g: k for k, g in enumerate(out_idx)}
    z = cert.zeta()
    G = cert.block_matrix()
    # classify each zeta coordinate
    kinds = []
    for u, v in z:
        hu = [g for g in range(p.nvars) for _ in range(u[g])]
        hv = [g for g in range(p.nvars) for _ in range(v[g])]
        if len(hu) + len(hv) != 2:
            raise ValueError("basis is not the bilinear pattern x_i y_k, x_i conj(y_k)")
        xs = [g for g in hu if g in pin], [g for g in hv if g in pin]
        ys = [g for g in hu if g in pout], [g for g in hv if g in pout]
        if len(xs[0]) + len(xs[1]) != 1 or len(ys[0]) + len(ys[1]) != 1:
            raise ValueError("basis is not the bilinear pattern x_i y_k, x_i conj(y_k)")
        x_hol = bool(xs[0])
        y_hol = bool(ys[0])
        i = pin[(xs[0] or xs[1])[0]]
        k = pout[(ys[0] or ys[1])[0]]
        if x_hol and y_hol:
            kinds.append(("z1", i * n + k, False))
        elif not x_hol and not y_hol:
            kinds.append(("z1", i * n + k, True))
        elif x_hol and not y_hol:
            kinds.append(("z2", i * n + k, False))
        else:
            kinds.append(("z2", i * n + k, True))
    nm = n * m
    zero = ZERO if exact else 0j
    H = {"z1": [[zero] * nm for _ in range(nm)], "z2": [[zero] * nm for _ in range(nm)]}
    for a, (fa, sa, ca) in enumerate(kinds):
        for b, (fb, sb, cb) in enumerate(kinds):
            if fa != fb or ca != cb:
                continue
            g = G[a][b] if exact else G[a, b]
            if not g:
                continue
            if ca:
                H[fa][sb][sa] = H[fa][sb][sa] + g
            else:
                H[fa][sa][sb] = H[fa][sa][sb] + g
    ops = {"z1": [], "z2": []}
    weights = {"z1": [], "z2": []}
    for fam in ("z1", "z2"):
        Hm = H[fam]
        if exact:
            fac = _exact_ldl(Hm)
            if fac is None:
                raise ValueError("Gram block is not PSD")
        else:
            arr = np.array(Hm, dtype=complex)
            w, U = np.linalg.eigh(0.5 * (arr + arr.conj().T))
            fac = [(float(w[t]), list(U[:, t])) for t in range(nm) if w[t] > 1e-12 * max(1.0, w[-1])]
        for d, l in fac:
            V = [[zero] * m for _ in range(n)]
            for i in range(m):
                for k in range(n):
                    lik = l[i * n + k]
                    V[k][i] = lik if fam == "z1" else (lik.conjugate() if exact else np.conj(lik))
            if not exact:
                V = np.array(V, dtype=complex)
            ops[fam].append(V)
            weights[fam].append(d)
    s1 = KrausSet(tuple(ops["z2"]), tuple(weights["z2"]), in_dim=m, out_dim=n)
    s2 = KrausSet(tuple(ops["z1"]), tuple(weights["z1"]), in_dim=m, out_dim=n)
    return s1, s2
