"""Small dense semidefinite programs with one Hermitian PSD variable.

Primal:  minimize <C, X>  s.t.  <A_i, X> = b_i,  X >= 0
Dual:    maximize b^T y   s.t.  Z = C - sum_i y_i A_i >= 0

with ``<A, X> = Re tr(A X)``.  Both are solved together by an infeasible
primal-dual path-following method (HKM direction, Mehrotra predictor-
corrector).  Constraint matrices are kept sparse; the Schur complement is
assembled from one Kronecker-structured tensor per iteration, which is
cheap when each constraint touches few entries (Gram and moment systems).

Every returned status is re-checked from the returned data by
:func:`check_outcome`, which uses separate code paths (dense per-constraint
traces and the Jacobi eigenvalue kernel).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .linalg import hermitian_eigenvalues

__all__ = ["SdpProblem", "SdpOutcome", "solve", "minimize", "check_outcome"]

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 50000
_IPM_ITER_CAP = 200


class SdpProblem:
    """Constraints ``<A_i, X> = b_i`` on a Hermitian ``dim x dim`` PSD variable.

    ``constraints`` is a sequence of ``(A_i, b_i)`` with ``A_i`` a dense
    array or scipy sparse matrix.  ``objective`` is an optional Hermitian
    ``C`` (minimized).
    """

    def __init__(self, dim: int, constraints: Sequence, objective=None):
        self.dim = int(dim)
        mats = []
        rhs = []
        for a, bi in constraints:
            a = sp.csr_matrix(a) if not sp.issparse(a) else a.tocsr()
            if a.shape != (self.dim, self.dim):
                raise ValueError("constraint matrix has the wrong dimension")
            d = a - a.conj().T
            if d.nnz and abs(d).max() > 1e-12 * max(1.0, abs(a).max()):
                raise ValueError("constraint matrix is not Hermitian")
            mats.append(a)
            rhs.append(float(bi))
        self.A = mats
        self.b = np.array(rhs, dtype=float)
        if objective is None:
            self.C = sp.csr_matrix((self.dim, self.dim))
        else:
            c = sp.csr_matrix(objective) if not sp.issparse(objective) else objective.tocsr()
            if c.shape != (self.dim, self.dim):
                raise ValueError("objective has the wrong dimension")
            self.C = c
        self.complex = any(np.iscomplexobj(a.data) and np.any(a.data.imag) for a in self.A + [self.C])
        self._op = None

    @classmethod
    def from_operator(cls, dim, rows: sp.spmatrix, b, objective=None):
        """Build from a sparse ``m x dim^2`` matrix whose row ``i`` is ``vec(A_i)``
        (row-major)."""
        prob = cls.__new__(cls)
        prob.dim = int(dim)
        rows = sp.csr_matrix(rows)
        prob.b = np.asarray(b, dtype=float)
        prob.A = [rows.getrow(i).reshape((dim, dim)).tocsr() for i in range(rows.shape[0])]
        prob.C = sp.csr_matrix((dim, dim)) if objective is None else sp.csr_matrix(objective)
        prob.complex = bool(np.iscomplexobj(rows.data) and np.any(rows.data.imag)) or bool(
            np.iscomplexobj(prob.C.data) and np.any(prob.C.data.imag))
        prob._op = rows
        return prob

    @property
    def m(self) -> int:
        return len(self.b)

    def operator(self) -> sp.csr_matrix:
        """Sparse ``m x dim^2`` matrix with rows ``vec(A_i)``."""
        if self._op is None:
            n2 = self.dim * self.dim
            if not self.A:
                self._op = sp.csr_matrix((0, n2))
            else:
                self._op = sp.vstack([a.reshape((1, n2)) for a in self.A]).tocsr()
        return self._op

    def scaled(self, factor: float) -> "SdpProblem":
        return SdpProblem(self.dim, [(a * factor, bi * factor) for a, bi in zip(self.A, self.b)],
                          self.C)


@dataclass
class SdpOutcome:
    status: str  # "optimal", "feasible", "infeasible", "indeterminate"
    X: np.ndarray | None
    y: np.ndarray | None
    Z: np.ndarray | None
    primal_objective: float = float("nan")
    dual_objective: float = float("nan")
    ray: np.ndarray | None = None
    margins: dict = field(default_factory=dict)
    iterations: int = 0
    message: str = ""

    @property
    def value(self) -> float:
        return self.primal_objective


# ---------------------------------------------------------------------------
# core interior point iteration


def _herm(a):
    return 0.5 * (a + a.conj().T)


def _max_step(x_chol, dx):
    """Largest ``a`` with ``X + a dX`` PSD, from a Cholesky factor of ``X``."""
    li = np.linalg.inv(x_chol)
    w = _herm(li @ dx @ li.conj().T)
    lam = np.linalg.eigvalsh(w)[0]
    if lam >= 0:
        return np.inf
    return -1.0 / lam


def _ipm(prob: SdpProblem, tol: float, max_iter: int):
    n = prob.dim
    op = prob.operator()
    opc = op.conj().tocsr()  # rows vec(conj A_i) = vec(A_i^T): <A_i, K> = Re(opc @ vec(K))
    b = prob.b
    m = len(b)
    dtype = complex if prob.complex else float
    if dtype is float:
        op = op.real.tocsr() if np.iscomplexobj(op.data) else op
        opc = op
    C = prob.C.toarray()
    C = C.astype(dtype) if dtype is complex else C.real.astype(float)
    eye = np.eye(n)

    def A_of(k):
        r = opc @ k.reshape(-1)
        return r.real if np.iscomplexobj(r) else r

    def A_adj(y):
        v = op.T @ y
        return v.reshape(n, n)

    anorms = np.sqrt(np.asarray(abs(op).power(2).sum(axis=1)).ravel()) if m else np.zeros(0)
    cnorm = np.linalg.norm(C)
    bnorm = np.linalg.norm(b)
    if m:
        xi = max(10.0, np.sqrt(n), n * max((1 + abs(b[i])) / (1 + anorms[i]) for i in range(m)))
        eta = max(10.0, np.sqrt(n), max(anorms.max(), cnorm) / np.sqrt(n))
    else:
        xi, eta = 10.0, max(10.0, cnorm)
    X = xi * eye.astype(dtype)
    Z = eta * eye.astype(dtype)
    y = np.zeros(m)
    best = None
    status = "indeterminate"
    message = "iteration limit"
    it = 0
    for it in range(1, max_iter + 1):
        rp = b - A_of(X)
        Rd = C - A_adj(y) - Z
        Rd = _herm(Rd)
        mu = float(np.real(np.vdot(X, Z))) / n
        pobj = float(np.real(np.vdot(C, X)))
        dobj = float(b @ y)
        pinf = np.linalg.norm(rp) / (1 + bnorm)
        dinf = np.linalg.norm(Rd) / (1 + cnorm)
        gap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        score = max(pinf, dinf, gap)
        if best is None or score < best[0]:
            best = (score, X.copy(), y.copy(), Z.copy(), it)
        if pinf <= tol and dinf <= tol and gap <= tol:
            status, message = "optimal", "converged"
            break
        if np.linalg.norm(X) > 1e13 or np.linalg.norm(y) > 1e13:
            message = "iterates diverged (problem likely infeasible or unbounded)"
            break
        try:
            zc = np.linalg.cholesky(Z)
            xc = np.linalg.cholesky(X)
        except np.linalg.LinAlgError:
            message = "lost positive definiteness"
            break
        zci = np.linalg.inv(zc)
        Zinv = zci.conj().T @ zci
        # Schur complement M_ij = Re tr(A_i Z^-1 A_j X)
        T = np.einsum("bc,da->abcd", Zinv, X).reshape(n * n, n * n)
        AT = (op @ T) if m else np.zeros((0, n * n))
        M = (op @ AT.T).T if m else np.zeros((0, 0))
        M = np.real(M)
        M = 0.5 * (M + M.T)
        reg = 0.0
        factor = None
        for _ in range(8):
            try:
                factor = np.linalg.cholesky(M + reg * np.eye(m)) if m else None
                break
            except np.linalg.LinAlgError:
                reg = max(1e-14 * max(1.0, np.max(np.abs(np.diag(M)))), reg * 100)
        if m and factor is None:
            message = "Schur complement is singular"
            break

        def schur_solve(r):
            if not m:
                return np.zeros(0)
            w = np.linalg.solve(factor, r)
            return np.linalg.solve(factor.conj().T, w).real

        ZRX = Zinv @ Rd @ X

        def direction(smu, corr):
            k = smu * Zinv - X - ZRX
            if corr is not None:
                k = k - corr
            dy = schur_solve(rp - A_of(k))
            dZ = _herm(Rd - A_adj(dy))
            dX = smu * Zinv - X - Zinv @ dZ @ X
            if corr is not None:
                dX = dX - corr
            return _herm(dX), dy, dZ

        dX, dy, dZ = direction(0.0, None)
        ap = min(1.0, _max_step(xc, dX))
        ad = min(1.0, _max_step(zc, dZ))
        mu_aff = float(np.real(np.vdot(X + ap * dX, Z + ad * dZ))) / n
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0
        corr = Zinv @ dZ @ dX
        dX, dy, dZ = direction(sigma * mu, corr)
        ap = min(1.0, 0.98 * _max_step(xc, dX))
        ad = min(1.0, 0.98 * _max_step(zc, dZ))
        X = _herm(X + ap * dX)
        y = y + ad * dy
        Z = _herm(Z + ad * dZ)
    else:
        it = max_iter
    if status != "optimal" and best is not None:
        _, X, y, Z, _ = best
    return status, X, y, Z, it, message


def _margins(prob: SdpProblem, X, y, Z):
    """Residuals recomputed constraint by constraint with dense traces."""
    res = []
    for a, bi in zip(prob.A, prob.b):
        val = float(np.real(np.sum(a.toarray().T * X)))
        res.append(abs(val - bi) / (1 + abs(bi)))
    C = prob.C.toarray()
    S = C - sum((yi * a.toarray() for yi, a in zip(y, prob.A)), np.zeros_like(C))
    out = {
        "primal_residual": max(res, default=0.0),
        "dual_residual": float(np.linalg.norm(S - Z) / (1 + np.linalg.norm(C))),
        "min_eig_X": hermitian_eigenvalues(_herm(X))[0] if X.size else 0.0,
        "min_eig_Z": hermitian_eigenvalues(_herm(S))[0] if S.size else 0.0,
    }
    return out


def check_outcome(prob: SdpProblem, out: SdpOutcome, tol: float = DEFAULT_TOL) -> bool:
    """Independent re-verification of a reported status from the returned data."""
    if out.status in ("feasible", "optimal"):
        if out.X is None:
            return False
        ev = hermitian_eigenvalues(_herm(out.X))
        if ev and ev[0] < -tol:
            return False
        for a, bi in zip(prob.A, prob.b):
            val = float(np.real(np.trace(a.toarray() @ out.X)))
            if abs(val - bi) > tol * (1 + abs(bi)):
                return False
        return True
    if out.status == "infeasible":
        y = out.ray
        if y is None:
            return False
        S = sum((yi * a.toarray() for yi, a in zip(y, prob.A)), np.zeros((prob.dim, prob.dim)))
        ev = hermitian_eigenvalues(_herm(S))
        return (not ev or ev[-1] <= tol) and float(np.dot(y, prob.b)) >= 1 - 1e-12
    return True


def _polish(prob: SdpProblem, X, tol: float, max_iter: int):
    """Alternate between the affine set and the PSD cone from a near-feasible ``X``.

    Interior point iterates on problems without a strictly feasible point stall
    around 1e-8; this projection loop closes the remaining gap.
    """
    n = prob.dim
    if not prob.A:
        return X, 0
    amat = np.vstack([a.toarray().T.reshape(-1) for a in prob.A])
    pinv = np.linalg.pinv(amat)
    b = np.asarray(prob.b, dtype=float)
    for k in range(max_iter):
        r = b - np.real(amat @ X.reshape(-1))
        X = X + (pinv @ r).reshape(n, n)
        X = _herm(X)
        w, v = np.linalg.eigh(X)
        if w[0] >= -0.1 * tol:
            return X, k + 1
        X = (v * np.clip(w, 0, None)) @ v.conj().T
    return X, max_iter


# ---------------------------------------------------------------------------
# public entry points


def minimize(prob: SdpProblem, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
             seed: int = 0) -> SdpOutcome:
    """Minimize ``<C, X>``; reports both objectives and the duality gap.

    The method is deterministic; ``seed`` is accepted for interface
    uniformity and does not influence the iterates.
    """
    status, X, y, Z, it, msg = _ipm(prob, tol, min(max_iter, _IPM_ITER_CAP))
    pobj = float(np.real(np.vdot(prob.C.toarray(), X)))
    dobj = float(prob.b @ y)
    margins = _margins(prob, X, y, Z)
    margins["gap"] = abs(pobj - dobj)
    out = SdpOutcome("optimal" if status == "optimal" else "indeterminate", X, y, Z, pobj, dobj,
                     margins=margins, iterations=it, message=msg)
    if out.status == "optimal" and not check_outcome(prob, out, max(tol, 1e-9)):
        # residuals small but eigenvalue/feasibility re-check failed at this tolerance
        out.status = "indeterminate"
        out.message = "re-check failed"
    return out


def solve(prob: SdpProblem, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
          seed: int = 0) -> SdpOutcome:
    """Feasibility: find ``X >= 0`` with ``<A_i, X> = b_i`` or an infeasibility ray.

    Solved through the auxiliary program
    ``min tau  s.t.  <A_i, X> + tau (b_i - tr A_i) = b_i,  X >= 0,  tau >= 0``,
    which starts strictly feasible at ``(I, 1)``.  Its optimal value is 0 iff
    the original system is (asymptotically) feasible; otherwise the dual
    multipliers give ``y`` with ``sum y_i A_i <= 0`` and ``b^T y > 0``.
    """
    n = prob.dim
    N = n + 1
    cons = []
    for a, bi in zip(prob.A, prob.b):
        tr = float(np.real(a.diagonal().sum()))
        big = sp.lil_matrix((N, N), dtype=complex if prob.complex else float)
        big[:n, :n] = a
        big[n, n] = bi - tr
        cons.append((big.tocsr(), bi))
    obj = sp.lil_matrix((N, N))
    obj[n, n] = 1.0
    aux = SdpProblem(N, cons, obj.tocsr())
    status, Xa, y, Za, it, msg = _ipm(aux, tol * 1e-2, min(max_iter, _IPM_ITER_CAP))
    tau = float(np.real(Xa[n, n]))
    # <A_i, X - tau I> = (1 - tau) b_i exactly, so this undoes the augmentation
    X = _herm(Xa[:n, :n])
    if 0 < tau < 1:
        X = (X - tau * np.eye(n)) / (1 - tau)
    bty = float(prob.b @ y)
    margins = _margins(prob, X, y, Za[:n, :n])
    margins["tau"] = tau
    out = SdpOutcome("indeterminate", X, None, None, iterations=it, margins=margins, message=msg)
    feas = SdpOutcome("feasible", X, None, None)
    if not check_outcome(prob, feas, tol) and tau <= max(tol, 1e-6):
        X, polish_it = _polish(prob, X, tol, max_iter)
        feas = SdpOutcome("feasible", X, None, None)
        margins = _margins(prob, X, y, Za[:n, :n])
        margins["tau"] = tau
        margins["polish_iterations"] = polish_it
        out = SdpOutcome("indeterminate", X, None, None, iterations=it, margins=margins, message=msg)
    if check_outcome(prob, feas, tol):
        out.status = "feasible"
        out.message = "feasible point found"
        return out
    if bty > 0:
        ray = y / bty
        infe = SdpOutcome("infeasible", None, None, None, ray=ray)
        if check_outcome(prob, infe, tol):
            out.status = "infeasible"
            out.ray = ray
            out.X = None
            out.message = "infeasibility ray found"
            return out
    out.message = f"undecided at tolerance {tol:g} ({msg})"
    return out
