import pickle
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from sepsos.linalg import HermitianMatrix, rational_psd_check, quadratic_form
from sepsos.maps import biquadratic_to_map, decomposable_from, map_to_biquadratic, random_kraus
from sepsos.poly import HermitianPolynomial, conjugate_square, evaluate, realify
from sepsos.scalars import GaussQ
from sepsos.states import partial_transpose, ppt_check, random_separable
from sepsos.sos import verify_gram, sos_check

small = st.integers(-3, 3)
gauss = st.builds(GaussQ, small, small)
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@given(gauss, gauss, gauss)
def test_gauss_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if b:
        assert (a / b) * b == a
    assert pickle.loads(pickle.dumps(a)) == a


@st.composite
def hermitian_rows(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    rows = [[GaussQ(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = GaussQ(draw(fracs))
        for j in range(i + 1, n):
            g = draw(gauss)
            rows[i][j] = g
            rows[j][i] = g.conjugate()
    return rows


@settings(max_examples=60, deadline=None)
@given(hermitian_rows())
def test_psd_witness_is_valid(rows):
    w = rational_psd_check(rows)
    ev = np.linalg.eigvalsh(np.array([[complex(x) for x in r] for r in rows]))
    if w.is_psd:
        assert w.reconstruct() == rows
        assert ev[0] >= -1e-9
    else:
        assert quadratic_form(rows, w.vector) < 0
        assert ev[0] < 1e-9


@settings(max_examples=60, deadline=None)
@given(hermitian_rows(max_n=3))
def test_gram_of_psd_matrix_verifies(rows):
    # zeta^H G zeta over degree-one monomials is SOS exactly when G is PSD-representable
    n = len(rows)
    m = HermitianMatrix(rows, "exact")
    if not rational_psd_check(m).is_psd:
        return
    terms = {}
    for i in range(n):
        for j in range(n):
            if rows[i][j]:
                u = tuple(int(k == j) for k in range(n))
                v = tuple(int(k == i) for k in range(n))
                terms[(u, v)] = rows[i][j]
    p = HermitianPolynomial(n, terms)
    if p.is_zero():
        return
    v = sos_check(p, seed=0)
    assert v.status in ("sos", "indeterminate")
    if v.is_sos:
        assert verify_gram(p, v.certificate)


@st.composite
def hermitian_polys(draw):
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        u = tuple(draw(st.integers(0, 2)) for _ in range(2))
        v = tuple(draw(st.integers(0, 2)) for _ in range(2))
        c = draw(gauss)
        if not c:
            continue
        if u == v:
            c = GaussQ(c.re)
            if not c:
                continue
            terms[(u, v)] = terms.get((u, v), GaussQ(0)) + c
        else:
            terms[(u, v)] = terms.get((u, v), GaussQ(0)) + c
            terms[(v, u)] = terms.get((v, u), GaussQ(0)) + c.conjugate()
    return HermitianPolynomial(2, {k: x for k, x in terms.items() if x})


@settings(max_examples=80, deadline=None)
@given(hermitian_polys(), st.lists(st.tuples(small, small), min_size=2, max_size=2))
def test_hermitian_values_are_real_and_match_realify(p, pt):
    z = [GaussQ(a, b) for a, b in pt]
    val = evaluate(p, z)
    assert isinstance(val, Fraction) or float(val) == val
    P = realify(p)
    assert P.evaluate([Fraction(a) for a, _ in pt] + [Fraction(b) for _, b in pt]) == val


@settings(max_examples=80, deadline=None)
@given(hermitian_polys(), st.lists(st.tuples(small, small), min_size=2, max_size=2))
def test_conjugate_square_is_nonnegative(p, pt):
    z = [GaussQ(a, b) for a, b in pt]
    assert evaluate(conjugate_square(p), z) == evaluate(p, z) ** 2


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([(2, 2), (2, 3), (3, 2)]))
def test_map_form_bijection(seed, dims):
    phi = decomposable_from(random_kraus(*dims, 2, seed), random_kraus(*dims, 1, seed + 1))
    assert biquadratic_to_map(map_to_biquadratic(phi)) == phi


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(2, 4), st.integers(2, 4), st.integers(1, 8))
def test_separable_states_are_ppt(seed, n, m, k):
    rho = random_separable((n, m), k, seed)
    assert ppt_check(rho, tol=1e-10).passed
    pt = partial_transpose(rho).to_numpy()
    assert abs(np.trace(pt) - 1) <= 1e-12
