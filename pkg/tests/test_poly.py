from fractions import Fraction

import numpy as np
import pytest

from conftest import parse_table
from sepsos.fixtures import appendix_p, appendix_q, choi_dehom, choi_polynomial, hakye_W
from sepsos.poly import (
    HermitianPolynomial,
    Poly,
    RealPolynomial,
    SupportSet,
    add,
    block_support,
    conjugate_square,
    dehomogenize,
    downward_closure,
    evaluate,
    homogenize,
    homogenize_pair,
    is_downward_closed,
    monomial_map,
    multiply,
    realify,
    support,
)
from sepsos.scalars import GaussQ, ONE

I = GaussQ(0, 1)


def z1(c=ONE, regime="exact"):
    return Poly.variable(1, 0, regime=regime).scale(c)


def zb1(regime="exact"):
    return Poly.variable(1, 0, conjugate=True, regime=regime)


def H(p):
    return HermitianPolynomial.from_poly(p)


def test_choi_value_at_ones(frozen):
    assert evaluate(choi_polynomial(), [1] * 6) == frozen["choi_at_ones"] == 3


def test_zero_polynomial_evaluates_to_zero():
    assert evaluate(HermitianPolynomial(3, {}), [1, 2, GaussQ(1, 1)]) == 0


def test_W_vanishes_at_curve_start(frozen):
    assert evaluate(hakye_W(), [0, 0, -4, 0, 1, 0]) == 0
    assert frozen["W_at_x0"] == "0"


def test_evaluate_dimension_mismatch():
    with pytest.raises(ValueError):
        evaluate(choi_polynomial(), [1, 2])


def test_evaluate_rejects_broken_symmetry():
    p = HermitianPolynomial(1, {((1,), (0,)): I, ((0,), (1,)): -I})  # i z - i zbar is Hermitian
    assert evaluate(p, [GaussQ(0, 1)]) == -2
    with pytest.raises(ValueError):
        HermitianPolynomial(1, {((1,), (0,)): I})


def test_multiply_add_square():
    zz = z1() * zb1()
    sq = multiply(zz, zz)
    assert sq.terms == {((2,), (2,)): ONE}
    g = H(z1() + zb1())
    assert conjugate_square(g).terms == {((2,), (0,)): ONE, ((1,), (1,)): GaussQ(2), ((0,), (2,)): ONE}
    assert add(g, -g).is_zero()


def test_conjugate_square_matches_oracle(frozen):
    g = H(z1() + zb1())
    assert conjugate_square(g).terms == parse_table(frozen["conjugate_square_z_plus_zbar"])


def test_mixed_regime_is_an_error():
    with pytest.raises((TypeError, ValueError)):
        z1() + z1(regime="float")


def test_realify_examples(frozen):
    assert realify(H(z1() * zb1())).terms == {(2, 0): 1, (0, 2): 1}
    assert realify(H(z1() + zb1())).terms == {(1, 0): 2}
    p = H(z1(I) + zb1().scale(-I))
    assert realify(p).terms == {(0, 1): -2}
    assert frozen["realify_i_z_minus_zbar"] == "-2*b"


def test_realify_agrees_with_evaluate():
    rng = np.random.default_rng(1)
    for p in (choi_polynomial(), hakye_W(), appendix_p(), appendix_q()):
        P = realify(p)
        for _ in range(50):
            z = rng.standard_normal(p.nvars) + 1j * rng.standard_normal(p.nvars)
            lhs = evaluate(p, list(z))
            rhs = P.evaluate(list(z.real) + list(z.imag))
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_dehomogenize_examples(frozen):
    ph = choi_dehom()
    a_hat = block_support((2, 2), 1, "le")
    assert set(support(ph).pairs) <= set(a_hat.pairs)
    q = appendix_q()
    assert q.terms == parse_table(frozen["appendix_q"]["coefficients"])
    assert q.names == tuple(frozen["appendix_q"]["names"])
    p = appendix_p()
    assert p.terms == parse_table(frozen["appendix_p"]["coefficients"])
    x3, x4, y2 = (p.var_index(n) for n in ("x3", "x4", "y2"))

    def mono(*idx):
        e = [0] * 4
        for i in idx:
            e[i] += 1
        return tuple(e)

    assert p.coefficient(mono(x3, y2), mono(x3, y2)) == 2
    assert p.coefficient(mono(x4, y2), mono(x4, y2)) == 2
    assert p.degree == 4


def test_dehomogenize_unknown_variable():
    with pytest.raises((KeyError, ValueError)):
        dehomogenize(hakye_W(), {"x9": 1})


def test_homogenize_round_trips():
    ph = choi_dehom()
    back = homogenize(ph, {"x": 1, "y": 1}, {"x": (2, "x3"), "y": (2, "y3")})
    assert back == choi_polynomial()
    p = appendix_p()
    back = homogenize(p, {"x": 1, "y": 1}, {"x": (0, "x1"), "y": (0, "y1")})
    assert back == hakye_W()
    one = HermitianPolynomial(2, {((0, 0), (0, 0)): ONE}, "exact", ("a", "b"), [("x", (0,)), ("y", (1,))])
    h = homogenize(dehomogenize(one, {}), {"x": 1, "y": 1}, {"x": (1, "s"), "y": (1, "t")})
    assert h.terms == {((0, 1, 0, 1), (0, 1, 0, 1)): ONE}


def test_homogenize_target_too_small():
    with pytest.raises(ValueError):
        homogenize(appendix_p(), {"x": 0, "y": 1}, {"x": (0, "x1"), "y": (0, "y1")})


def test_downward_closure_examples():
    assert is_downward_closed(block_support((2, 2), 1, "le"))
    assert not is_downward_closed(block_support((3, 3), 1, "eq"))
    assert is_downward_closed(SupportSet(2, []))
    a = block_support((3, 3), 1, "eq")
    assert is_downward_closed(downward_closure(a))


def test_support_set_requires_swap_closure():
    with pytest.raises(ValueError):
        SupportSet(1, [((1,), (0,))])


def test_monomial_map_examples(frozen):
    assert np.allclose(monomial_map(SupportSet(2, [((0, 0), (0, 0))]), [3, 4]), [1])
    a_hat = block_support((2, 2), 1, "le")
    assert np.allclose(monomial_map(a_hat, [1, 1, 1, 1]), np.ones(len(a_hat)))
    full = block_support((3, 3), 1, "eq")
    z = np.array([1, 2, 1, 1, 1, 2], dtype=complex)
    order = [homogenize_pair(m, (2, 2), 1) for m in a_hat.ordered()]
    lhs = monomial_map(full, z, order)
    rhs = abs(z[2]) ** 2 * abs(z[5]) ** 2 * monomial_map(a_hat, [z[0] / z[2], z[1] / z[2], z[3] / z[5], z[4] / z[5]])
    assert np.allclose(lhs, rhs)
    assert sorted(np.real(lhs).round().astype(int).tolist()) == frozen["section_instance_mA_sorted"]
    with pytest.raises(ValueError):
        monomial_map(full, [1, 2])


def test_json_round_trip():
    for p in (choi_polynomial(), appendix_q()):
        assert HermitianPolynomial.from_poly(Poly.from_json(p.to_json())) == p
    P = realify(appendix_q())
    assert RealPolynomial.from_json(P.to_json()).terms == P.terms


def test_real_polynomial_rejects_complex():
    with pytest.raises(ValueError):
        RealPolynomial(1, {(1,): GaussQ(0, 1)})
    assert RealPolynomial(1, {(2,): Fraction(1, 2)}).evaluate([2]) == 2
