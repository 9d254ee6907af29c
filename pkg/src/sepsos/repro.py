"""Reproduction claims: each one checks a concrete result end to end.

Every claim returns a :class:`ClaimResult`; :func:`run_claims` runs a
selection in a fixed order (optionally in worker processes) and
:func:`write_report` renders the JSON and text reports.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import fixtures as fx
from .maps import decomposable_from, map_to_biquadratic, random_decomposable
from .poly import (
    HermitianPolynomial,
    Poly,
    RealPolynomial,
    block_support,
    dehomogenize,
    homogenize_pair,
    monomial_map,
    monomial_str,
    real_restriction,
    realify,
)
from .scalars import GaussQ, parse_scalar
from .sdp import SdpProblem, check_outcome, solve
from .sos import (
    GramCertificate,
    candidate_basis,
    certificate_from_json,
    gram_feasibility_problem,
    real_sos_check,
    sos_check,
    sos_to_decomposable,
    verify_gram,
    verify_moment,
)
from .states import embed_section, maximally_entangled, ppt_check, random_separable, section_predicate
from .zeros import ZeroCurve, curve_vanishing_check, moment_certificate_from_zeros, prove_not_sos

__all__ = ["CLAIMS", "ClaimResult", "run_claims", "write_report", "load_fixture",
           "random_real_biquadratic", "random_small_hermitian", "exit_code", "report_json", "report_text"]

SEEDS = {
    "decomposable-roundtrip": 1000,
    "ppt-suite": 2000,
    "section-identity": 3000,
    "real-42-sos": 4000,
    "solver-consistency": 5000,
}


@dataclass
class ClaimResult:
    id: str
    anchor: str
    status: str  # pass | fail | indeterminate
    data: dict = field(default_factory=dict)
    wall_time: float = 0.0


def load_fixture(name: str, overrides: dict | None = None):
    """A fixture by name, or the object stored in an override JSON file."""
    key = name.replace("-", "_")
    if overrides and key in overrides:
        with open(overrides[key]) as fh:
            data = json.load(fh)
        return _from_json(key, data)
    if key == "appendix_certificate" and overrides and ({"cert_A", "cert_B"} & set(overrides)):
        # rebuild the certificate from the (possibly overridden) blocks
        A = load_fixture("cert_A", overrides)
        B = load_fixture("cert_B", overrides)
        A = [list(r) for r in A.rows] if hasattr(A, "rows") else A
        return GramCertificate(fx.appendix_q().nvars, fx.cert_monomials(), A, B, "exact")
    return fx.get_fixture(key)


def _from_json(key, data):
    if key in ("appendix_certificate",):
        return certificate_from_json(data)
    if key in ("zero_curve",):
        return ZeroCurve.from_json(data)
    if key in ("cert_A", "cert_B"):
        return [[parse_scalar(x.get("re"), x.get("im"), "exact") for x in row] for row in data["entries"]]
    if key in ("hakye_map",):
        from .maps import MatrixMap

        return MatrixMap.from_json(data)
    return HermitianPolynomial.from_poly(Poly.from_json(data))


# ---------------------------------------------------------------------------
# claims


def claim_appendix_q_sos(ov):
    q = load_fixture("appendix_q", ov)
    cert = load_fixture("appendix_certificate", ov)
    ok = verify_gram(q, cert)
    return ("pass" if ok else "fail"), {"verified": ok, "basis_size": len(cert.basis)}


def claim_zero_curve(ov):
    W = load_fixture("hakye_W", ov)
    c = load_fixture("zero_curve", ov)
    whole = ZeroCurve(c.components, c.denominator_index, c.excluded, c.blocks)
    ok = curve_vanishing_check(W, whole)
    return ("pass" if ok else "fail"), {"vanishes": ok}


EXPECTED_ROWS = {
    # parameter monomial -> {(holomorphic names, antiholomorphic names): coefficient}
    ((4,), (0,)): {((("y2",), ("x4",))): 4},
    ((4,), (1,)): {((("y2",), ("x3",))): 4, ((("y2",), ("x4",))): 2},
    ((2,), (0,)): {(((), ("x4",))): -4, ((("y2",), ("x3",))): -8},
}


def _mono_by_names(names, hol, anti):
    n = len(names)
    u = [0] * n
    v = [0] * n
    for s in hol:
        u[names.index(s)] += 1
    for s in anti:
        v[names.index(s)] += 1
    return (tuple(u), tuple(v))


def claim_forced_zeros(ov):
    p = load_fixture("appendix_p", ov)
    curve = load_fixture("zero_curve", ov)
    W = load_fixture("hakye_W", ov)
    res, system, gb = prove_not_sos(p, curve, homogeneous=W)
    data = {"verdict": res.verdict}
    rows_ok = True
    for pm, want in EXPECTED_ROWS.items():
        want_m = {_mono_by_names(p.names, h, a): GaussQ(c) for (h, a), c in want.items()}
        try:
            got = system.row(pm)
        except ValueError:
            got = None
        if got != want_m:
            rows_ok = False
        data[monomial_str(pm, ("alpha",))] = None if got is None else {
            monomial_str(m, p.names): str(c) for m, c in got.items()}
    data["rows_match"] = rows_ok
    if res.verdict != "not_sos":
        return "fail", data
    sq = _mono_by_names(p.names, ("x4",), ("x4",))
    data.update(res.report(p.names))
    coef_ok = res.square == sq and res.coefficient == GaussQ(4)
    mc = moment_certificate_from_zeros(p, curve, res, gb)
    mom_ok = mc is not None and verify_moment(p, mc)
    data["moment_certificate"] = mom_ok
    data["moment_value_on_p"] = None if mc is None else str(mc.value_on_p)
    return ("pass" if rows_ok and coef_ok and mom_ok else "fail"), data


EXPECTED_BASIS = [((), ()), (("y2",), ()), (("x2",), ()), (("x4",), ()), (("y2", "x3"), ()),
                  (("y2", "x4"), ()), (("x3",), ("y2",)), (("x4",), ("y2",))]


def claim_candidate_basis(ov):
    p = load_fixture("appendix_p", ov)
    gb = candidate_basis(p)
    want = set()
    for hol, anti in EXPECTED_BASIS:
        m = _mono_by_names(p.names, hol, anti)
        want.add(m)
        want.add((m[1], m[0]))
    got = set(gb.monomials)
    data = {"size": len(got), "expected_size": len(want),
            "extra": sorted(monomial_str(m, p.names) for m in got - want),
            "missing": sorted(monomial_str(m, p.names) for m in want - got)}
    if got == want:
        return "pass", data
    if got > want:
        data["discrepancy"] = "generic rule yields a strict superset"
        res, _, _ = prove_not_sos(p, load_fixture("zero_curve", ov), basis=gb)
        return ("pass" if res.verdict == "not_sos" else "fail"), data
    return "fail", data


def claim_choi_not_sos(ov):
    c = load_fixture("choi_polynomial", ov)
    v = sos_check(c, mode="exact", seed=0)
    ok = v.status == "not_sos" and verify_moment(c, v.certificate)
    P = real_restriction(c)
    vr = real_sos_check(P, mode="exact", seed=0)
    ok_r = vr.status == "not_sos" and verify_moment(P, vr.certificate)
    data = {"hermitian": v.status, "method": v.method, "gram_dim": 2 * len(v.basis.half()) if v.basis else None,
            "value_on_p": str(v.certificate.value_on_p) if v.status == "not_sos" else None,
            "real_restriction": vr.status}
    if ok and ok_r:
        return "pass", data
    if v.status == "indeterminate" or vr.status == "indeterminate":
        return "indeterminate", data
    return "fail", data


ROUNDTRIP_DIMS = ((2, 2), (3, 2), (3, 3))


def claim_decomposable_roundtrip(ov, count: int = 50):
    base = SEEDS["decomposable-roundtrip"]
    fails, indet = [], []
    for t in range(count):
        dims = ROUNDTRIP_DIMS[t % 3]
        phi = random_decomposable(*dims, base + t)
        p = map_to_biquadratic(phi)
        v = sos_check(p, seed=0)
        if v.status != "sos":
            (indet if v.status == "indeterminate" else fails).append(t)
            continue
        s1, s2 = sos_to_decomposable(p, v.certificate)
        if decomposable_from(s1, s2) != phi:
            fails.append(t)
    data = {"maps": count, "failures": fails, "indeterminate": indet}
    return ("fail" if fails else "indeterminate" if indet else "pass"), data


def claim_ppt_suite(ov, count: int = 1000):
    rng = np.random.default_rng(SEEDS["ppt-suite"])
    worst = np.inf
    fails = 0
    for t in range(count):
        n, m = (int(d) for d in rng.integers(2, 5, size=2))
        k = int(rng.integers(1, 9))
        r = ppt_check(random_separable((n, m), k, int(rng.integers(0, 2**31))), tol=1e-10)
        worst = min(worst, r.min_eigenvalue)
        fails += not r.passed
    bell = ppt_check(maximally_entangled(2), tol=1e-10)
    bell_ok = (not bell.passed) and abs(bell.min_eig_pt + 0.5) <= 1e-10
    data = {"states": count, "failures": fails, "worst_min_eigenvalue": float(worst),
            "entangled_min_eigenvalue": bell.min_eig_pt}
    return ("pass" if fails == 0 and bell_ok else "fail"), data


def section_identity_error(points: int, seed: int) -> float:
    """Max relative error of ``m_A(z) = |x3|^2 |y3|^2 m_Ahat(x/x3, y/y3)`` over (3,3) forms."""
    full = block_support((3, 3), 1, "eq")
    hat = block_support((2, 2), 1, "le")
    order_hat = hat.ordered()
    order_full = [homogenize_pair(m, (2, 2), 1) for m in order_hat]
    if set(order_full) != set(full.pairs):
        raise AssertionError("homogenization does not biject onto the full support")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        z = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        lhs = monomial_map(full, z, order_full)
        zh = np.array([z[0] / z[2], z[1] / z[2], z[3] / z[5], z[4] / z[5]])
        rhs = abs(z[2]) ** 2 * abs(z[5]) ** 2 * monomial_map(hat, zh, order_hat)
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1e-300))))
    return worst


def claim_section_identity(ov, points: int = 1000):
    seed = SEEDS["section-identity"]
    err = section_identity_error(points, seed)
    rho = random_separable((2, 3), 4, seed)
    emb = embed_section(rho, 4)
    rt = section_predicate(emb, 2)
    x = np.array([0, 0, 0, 1.0])
    y = np.array([1.0, 0, 0])
    from .states import product_state

    outside = not section_predicate(product_state(x, y), 2)
    prov_ok = all(np.all(t.x[2:] == 0) for t in emb.provenance)
    data = {"max_relative_error": err, "embed_round_trip": rt, "off_section_rejected": outside,
            "provenance_confined": prov_ok}
    return ("pass" if err <= 1e-12 and rt and outside and prov_ok else "fail"), data


GRID_ANGLES = 4001


def _grid_min(P, R, S, s):
    th = np.linspace(0.0, np.pi, GRID_ANGLES)
    c, d = np.cos(th)[:, None, None], np.sin(th)[:, None, None]
    mats = c * c * P + c * d * s * S + d * d * R
    return float(np.linalg.eigvalsh(mats)[:, 0].min())


def random_real_biquadratic(seed: int, shrink: Fraction = Fraction(19, 20)):
    """A real form ``x^T B(y) x`` in ``(x1..x4, y1, y2)`` screened nonnegative.

    ``B(y) = y1^2 P + y1 y2 s S + y2^2 R`` with integer PSD ``P, R``; the
    factor ``s`` is pushed toward the grid boundary of nonnegativity and then
    shrunk, so the forms sit near the edge of the nonnegative cone.
    Returns ``(poly, grid_min)``.
    """
    rng = np.random.default_rng(seed)
    q1 = rng.integers(-3, 4, (4, 4))
    q2 = rng.integers(-3, 4, (4, 4))
    P, R = q1 @ q1.T, q2 @ q2.T
    S = rng.integers(-6, 7, (4, 4))
    S = S + S.T
    lo, hi = 0.0, 1.0
    while _grid_min(P, R, S, hi) >= 0 and hi < 1e3:
        hi *= 2
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        if _grid_min(P, R, S, mid) >= 0:
            lo = mid
        else:
            hi = mid
    s = Fraction(lo).limit_denominator(100) * shrink
    terms: dict = {}
    for i in range(4):
        for j in range(4):
            for k, l, c in ((0, 0, Fraction(int(P[i, j]))), (1, 1, Fraction(int(R[i, j]))),
                            (0, 1, s * int(S[i, j]))):
                e = [0] * 6
                e[i] += 1
                e[j] += 1
                e[4 + k] += 1
                e[4 + l] += 1
                terms[tuple(e)] = terms.get(tuple(e), 0) + c
    poly = RealPolynomial(6, terms, "exact", ("x1", "x2", "x3", "x4", "y1", "y2"))
    return poly, _grid_min(P, R, S, float(s))


def claim_real_42_sos(ov, count: int = 50):
    base = SEEDS["real-42-sos"]
    statuses = {"sos": 0, "not_sos": 0, "indeterminate": 0}
    screened_out = 0
    t = 0
    accepted = 0
    while accepted < count:
        P, gmin = random_real_biquadratic(base + t)
        t += 1
        if gmin < 0:
            screened_out += 1
            continue
        accepted += 1
        statuses[real_sos_check(P, mode="exact", seed=0).status] += 1
    data = {"forms": count, "screened_out": screened_out, **statuses}
    if statuses["not_sos"]:
        return "fail", data
    return ("pass" if statuses["indeterminate"] <= 5 else "indeterminate"), data


def _basic_sdp_problems():
    import scipy.sparse as sp

    def e(i, j, n):
        m = sp.lil_matrix((n, n))
        m[i, j] = 1
        return m.tocsr()

    eye2 = sp.identity(2, format="csr")
    return {
        "trace-forced": SdpProblem(2, [(eye2, 1.0), (e(0, 0, 2), 1.0)]),
        "negative-diagonal": SdpProblem(1, [(e(0, 0, 1), -1.0)]),
    }


def fixture_sdp_problems(ov=None):
    from .maps import identity_map, transpose_map

    probs = dict(_basic_sdp_problems())
    probs["appendix-q-cert-basis"] = gram_feasibility_problem(load_fixture("appendix_q", ov), fx.cert_monomials())
    probs["appendix-q"] = gram_feasibility_problem(load_fixture("appendix_q", ov))
    probs["appendix-p"] = gram_feasibility_problem(load_fixture("appendix_p", ov))
    probs["choi"] = gram_feasibility_problem(load_fixture("choi_polynomial", ov))
    probs["identity-2"] = gram_feasibility_problem(map_to_biquadratic(identity_map(2)))
    probs["transpose-2"] = gram_feasibility_problem(map_to_biquadratic(transpose_map(2)))
    return probs


def random_small_hermitian(seed: int) -> HermitianPolynomial:
    """``zeta^H G zeta`` for a random integer Hermitian ``G`` over low-degree monomials.

    One or two complex variables; ``G`` is PSD plus a random indefinite
    perturbation, so both verdicts occur.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 3))
    monos = []
    for u0 in range(2):
        for v0 in range(2):
            if n == 1:
                monos.append(((u0,), (v0,)))
            else:
                for u1 in range(2):
                    if u0 + v0 + u1 <= 2:
                        monos.append(((u0, u1), (v0, 0)))
    k = len(monos)
    a = rng.integers(-2, 3, (k, k)) + 1j * rng.integers(-2, 3, (k, k))
    G = a @ a.conj().T
    if rng.random() < 0.5:
        b = rng.integers(-3, 4, (k, k)) + 1j * rng.integers(-3, 4, (k, k))
        G = G + (b + b.conj().T)
    from .poly import conj_monomial, monomial_product

    terms: dict = {}
    for i in range(k):
        for j in range(k):
            g = G[i, j]
            if g:
                w = monomial_product(conj_monomial(monos[i]), monos[j])
                terms[w] = terms.get(w, GaussQ(0)) + GaussQ(int(g.real), int(g.imag))
    return HermitianPolynomial(n, {w: c for w, c in terms.items() if c}, "exact")


def claim_solver_consistency(ov, count: int = 100):
    statuses = {}
    bad = []
    for name, prob in fixture_sdp_problems(ov).items():
        out = solve(prob, seed=0)
        statuses[name] = out.status
        if out.status != "indeterminate" and not check_outcome(prob, out):
            bad.append(name)
    base = SEEDS["solver-consistency"]
    agree = disagree = skipped = 0
    mismatches = []
    for t in range(count):
        p = random_small_hermitian(base + t)
        if not p.terms:
            skipped += 1
            continue
        a = sos_check(p, mode="exact", seed=0).status
        b = real_sos_check(realify(p), mode="exact", seed=0).status
        if "indeterminate" in (a, b):
            skipped += 1
        elif a == b:
            agree += 1
        else:
            disagree += 1
            mismatches.append(base + t)
    data = {"sdp_statuses": statuses, "unverified": bad, "agree": agree, "disagree": disagree,
            "skipped": skipped, "mismatch_seeds": mismatches}
    return ("pass" if not bad and not disagree else "fail"), data


CLAIMS = {
    "appendix-q-sos": ("gram certificate for q verifies", claim_appendix_q_sos),
    "zero-curve": ("W vanishes on the zero curve", claim_zero_curve),
    "forced-zeros": ("p is not SOS via forced zeros", claim_forced_zeros),
    "candidate-basis": ("candidate basis for p", claim_candidate_basis),
    "choi-not-sos": ("Choi form is not SOS", claim_choi_not_sos),
    "decomposable-roundtrip": ("decomposable map from SOS certificate", claim_decomposable_roundtrip),
    "ppt-suite": ("separable states are PPT", claim_ppt_suite),
    "section-identity": ("homogenization and section identities", claim_section_identity),
    "real-42-sos": ("nonnegative (4,2) real forms are SOS", claim_real_42_sos),
    "solver-consistency": ("solver statuses re-verify; Hermitian and real verdicts agree",
                           claim_solver_consistency),
}


def _run_one(cid: str, overrides: dict | None) -> ClaimResult:
    anchor, fn = CLAIMS[cid]
    t = time.perf_counter()
    try:
        status, data = fn(overrides)
    except Exception as exc:  # a crashing claim is a failed claim
        status, data = "fail", {"error": f"{type(exc).__name__}: {exc}"}
    return ClaimResult(cid, anchor, status, _jsonable(data), time.perf_counter() - t)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, (Fraction, GaussQ)):
        return str(x)
    return x


def run_claims(only=None, parallel: bool = False, overrides: dict | None = None) -> list[ClaimResult]:
    ids = list(CLAIMS) if not only else [c for c in CLAIMS if c in set(only)]
    unknown = set(only or ()) - set(CLAIMS)
    if unknown:
        raise KeyError(f"unknown claim id(s): {', '.join(sorted(unknown))}")
    if parallel and len(ids) > 1:
        with ProcessPoolExecutor() as pool:
            futs = {cid: pool.submit(_run_one, cid, overrides) for cid in ids}
            return [futs[cid].result() for cid in ids]
    return [_run_one(cid, overrides) for cid in ids]


def exit_code(results) -> int:
    if any(r.status == "fail" for r in results):
        return 1
    if any(r.status == "indeterminate" for r in results):
        return 2
    return 0


def report_json(results) -> dict:
    return {"claims": [asdict(r) for r in results], "passed": sum(r.status == "pass" for r in results),
            "total": len(results)}


def report_text(results) -> str:
    lines = [f"{r.status.upper():<13} {r.id:<24} {r.wall_time:8.2f}s  {r.anchor}" for r in results]
    lines.append(f"{sum(r.status == 'pass' for r in results)}/{len(results)} claims pass")
    return "\n".join(lines) + "\n"


def write_report(results, out_path: str) -> None:
    with open(out_path, "w") as fh:
        json.dump(report_json(results), fh, indent=2)
    txt = out_path[:-5] + ".txt" if out_path.endswith(".json") else out_path + ".txt"
    with open(txt, "w") as fh:
        fh.write(report_text(results))
