import copy
from fractions import Fraction

import numpy as np
import pytest

from sepsos.fixtures import appendix_certificate, appendix_p, appendix_q, cert_monomials, choi_polynomial
from sepsos.maps import KrausSet, decomposable_from, identity_map, map_to_biquadratic, random_kraus, transpose_map
from sepsos.poly import HermitianPolynomial, Poly, RealPolynomial, conjugate_square, realify
from sepsos.scalars import GaussQ, ONE, ZERO
from sepsos.sos import (
    GramBasis,
    GramCertificate,
    MomentCertificate,
    candidate_basis,
    certificate_from_json,
    real_sos_check,
    sos_check,
    sos_to_decomposable,
    verify_gram,
    verify_moment,
    verify_real_gram,
)


def zz():
    return HermitianPolynomial(1, {((1,), (1,)): ONE})


def test_z_zbar_is_sos():
    v = sos_check(zz(), seed=0)
    assert v.is_sos and verify_gram(zz(), v.certificate)


def test_appendix_certificate_verifies(frozen):
    assert verify_gram(appendix_q(), appendix_certificate())
    assert frozen["appendix_gram_identity"] and frozen["A_minus_B_psd"] and frozen["A_plus_B_psd"]


def test_perturbed_certificate_fails(frozen):
    cert = appendix_certificate()
    A = copy.deepcopy(cert.A)
    A[0][0] = A[0][0] - 1
    bad = GramCertificate(cert.nvars, cert.basis, A, cert.B, "exact")
    assert not verify_gram(appendix_q(), bad)
    assert frozen["perturbed_gram_identity"] is False


def test_zero_polynomial_has_empty_certificate():
    p = HermitianPolynomial(2, {})
    v = sos_check(p, seed=0)
    assert v.is_sos and v.certificate.size == 0
    assert verify_gram(p, v.certificate)


def test_moment_certificate_rejected_on_sos_polynomial():
    c = choi_polynomial()
    v = sos_check(c, seed=0)
    assert v.is_not_sos and verify_moment(c, v.certificate)
    # L is nonnegative on Hermitian squares, so it cannot refute a sum of squares
    F = v.certificate.basis
    sq = HermitianPolynomial(c.nvars, {})
    for m in F[:3]:
        sq = sq + conjugate_square(HermitianPolynomial.from_poly(Poly(c.nvars, {m: ONE}) + Poly(c.nvars, {(m[1], m[0]): ONE})))
    assert not verify_moment(sq, v.certificate)


def test_verify_moment_missing_monomial_raises():
    cert = MomentCertificate(1, (((0,), (0,)),), {((0,), (0,)): GaussQ(1)}, Fraction(-1))
    with pytest.raises(ValueError):
        verify_moment(zz(), cert)


def test_identity_and_transpose_forms_are_sos():
    for phi in (identity_map(2), transpose_map(2), identity_map(3)):
        p = map_to_biquadratic(phi)
        v = sos_check(p, seed=0)
        assert v.is_sos
        s1, s2 = sos_to_decomposable(p, v.certificate)
        assert decomposable_from(s1, s2) == phi


def test_kraus_example_round_trip():
    k1 = random_kraus(2, 2, 4, seed=5)
    k2 = random_kraus(2, 2, 1, seed=6)
    phi = decomposable_from(k1, k2)
    p = map_to_biquadratic(phi)
    v = sos_check(p, seed=0)
    assert v.is_sos
    assert decomposable_from(*sos_to_decomposable(p, v.certificate)) == phi
    only_t = decomposable_from(KrausSet((), in_dim=2, out_dim=2), k2)
    v = sos_check(map_to_biquadratic(only_t), seed=0)
    assert v.is_sos


def test_real_square_of_sum_of_squares():
    P = RealPolynomial(2, {(4, 0): 1, (2, 2): 2, (0, 4): 1})
    v = real_sos_check(P, seed=0)
    assert v.is_sos and verify_real_gram(P, v.certificate)


def test_real_motzkin_not_sos():
    P = RealPolynomial(3, {(4, 2, 0): 1, (2, 4, 0): 1, (0, 0, 6): 1, (2, 2, 2): -3})
    v = real_sos_check(P, seed=0)
    assert v.is_not_sos and verify_moment(P, v.certificate)


def test_outside_monomial_is_refuted_by_support():
    # z^2 conj(z)^0 + conj: no diagonal term can carry it
    p = HermitianPolynomial(1, {((2,), (0,)): ONE, ((0,), (2,)): ONE})
    v = sos_check(p, seed=0)
    assert v.is_not_sos and verify_moment(p, v.certificate)


def test_choi_and_appendix_p_not_sos():
    for p in (choi_polynomial(), appendix_p()):
        v = sos_check(p, seed=0)
        assert v.is_not_sos
        assert verify_moment(p, v.certificate)


def test_appendix_q_sos_over_certificate_monomials():
    q = appendix_q()
    v = sos_check(q, basis=cert_monomials(), seed=0)
    assert v.is_sos and verify_gram(q, v.certificate)


def test_candidate_basis_sizes():
    assert len(candidate_basis(appendix_p())) == 15
    assert len(candidate_basis(choi_polynomial())) == 24


def test_gram_basis_closure_and_half():
    gb = GramBasis.closure(1, [((1,), (0,))])
    assert set(gb.monomials) == {((1,), (0,)), ((0,), (1,))}
    assert len(gb.half()) == 1


def _random_square_sum(seed):
    rng = np.random.default_rng(seed)
    n = 2
    p = HermitianPolynomial(n, {})
    monos = [((1, 0), (0, 0)), ((0, 1), (0, 0)), ((0, 0), (1, 0)), ((1, 0), (0, 1)), ((0, 0), (0, 0))]
    for _ in range(2):
        terms = {}
        for m in monos:
            c = GaussQ(int(rng.integers(-2, 3)), int(rng.integers(-2, 3)))
            if c:
                terms[m] = terms.get(m, ZERO) + c
                cm = (m[1], m[0])
                terms[cm] = terms.get(cm, ZERO) + c.conjugate()
        terms = {k: v for k, v in terms.items() if v}
        if terms:
            p = p + conjugate_square(HermitianPolynomial(n, terms))
    return p


@pytest.mark.parametrize("seed", range(12))
def test_squares_are_sos_and_elimination_is_sound(seed):
    p = _random_square_sum(seed)
    if p.is_zero():
        return
    v = sos_check(p, seed=0)
    assert v.status in ("sos", "indeterminate")
    if v.is_sos:
        assert verify_gram(p, v.certificate)
    assert real_sos_check(realify(p), seed=0).status in ("sos", "indeterminate")


def test_certificate_json_round_trip():
    cert = appendix_certificate()
    back = certificate_from_json(cert.to_json())
    assert verify_gram(appendix_q(), back)
    v = sos_check(choi_polynomial(), seed=0)
    assert verify_moment(choi_polynomial(), certificate_from_json(v.certificate.to_json()))


def test_numeric_mode_returns_float_certificate():
    p = map_to_biquadratic(identity_map(2))
    v = sos_check(p, mode="numeric", seed=0)
    assert v.is_sos and v.certificate.regime == "float"
    assert verify_gram(p, v.certificate)


def test_exact_mode_rejects_float_polynomial():
    p = HermitianPolynomial(1, {((1,), (1,)): 1.0}, "float")
    with pytest.raises(TypeError):
        sos_check(p, mode="exact")
    with pytest.raises(ValueError):
        sos_check(zz(), mode="fast")
