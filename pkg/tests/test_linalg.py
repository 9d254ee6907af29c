from fractions import Fraction

import numpy as np
import pytest

from sepsos.fixtures import cert_A, cert_B
from sepsos.kernels import python_jacobi_eigenvalues
from sepsos.linalg import (
    HermitianMatrix,
    exact_matmul,
    hermitian_eigenvalues,
    quadratic_form,
    rational_psd_check,
    solve_linear_exact,
)
from sepsos.scalars import GaussQ, ONE, ZERO


def G(*rows):
    return [[GaussQ(Fraction(x)) if not isinstance(x, GaussQ) else x for x in r] for r in rows]


def test_eigenvalues_identity_and_swap():
    assert np.allclose(hermitian_eigenvalues(np.eye(2)), [1, 1])
    assert np.allclose(hermitian_eigenvalues(np.array([[0.0, 1.0], [1.0, 0.0]])), [-1, 1])


def test_eigenvalues_bell_partial_transpose(frozen):
    pt = np.zeros((4, 4))
    pt[0, 0] = pt[3, 3] = 0.5
    pt[1, 2] = pt[2, 1] = 0.5
    want = sorted(float(Fraction(s)) for s in frozen["bell_partial_transpose_eigenvalues"])
    assert np.allclose(hermitian_eigenvalues(pt), want, atol=1e-12)


def test_eigenvalues_complex_backward_error():
    rng = np.random.default_rng(3)
    for n in (1, 3, 7, 12):
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = (a + a.conj().T) / 2
        ev = hermitian_eigenvalues(h)
        assert ev == sorted(ev)
        assert np.allclose(ev, np.linalg.eigvalsh(h), atol=1e-10 * np.linalg.norm(h))


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        HermitianMatrix(np.zeros((2, 3)))


def test_python_kernel_matches_numpy():
    rng = np.random.default_rng(0)
    b = rng.standard_normal((9, 9))
    a = (b + b.T) / 2
    vals, _ = python_jacobi_eigenvalues(a)
    assert np.allclose(vals, np.linalg.eigvalsh(a), atol=1e-12)


def test_exact_hermitian_validation():
    with pytest.raises(ValueError):
        HermitianMatrix([[1, 2], [3, 1]])
    m = HermitianMatrix([[1, GaussQ(0, 1)], [GaussQ(0, -1), 2]])
    assert m.entry(0, 1) == GaussQ(0, 1)
    assert HermitianMatrix.from_json(m.to_json()) == m


def test_float_matrix_symmetrized_within_tolerance():
    a = np.array([[1.0, 2.0], [2.0 + 1e-13, 1.0]])
    m = HermitianMatrix(a)
    assert m.entry(0, 1) == m.entry(1, 0)


def test_psd_appendix_blocks():
    A, B = cert_A(), cert_B()
    for sign in (1, -1):
        m = [[A[i][j] + sign * B[i][j] for j in range(6)] for i in range(6)]
        w = rational_psd_check(m)
        assert w.is_psd
        assert w.reconstruct() == m


def test_psd_minus_identity():
    w = rational_psd_check(G([-1, 0], [0, -1]))
    assert not w.is_psd
    assert w.value < 0
    assert quadratic_form(G([-1, 0], [0, -1]), w.vector) == w.value


def test_psd_indefinite_counterexample(frozen):
    m = G([1, 2], [2, 1])
    v = (ONE, -ONE)
    assert quadratic_form(m, v) == frozen["psd_counterexample_value"]
    w = rational_psd_check(m)
    assert w.kind == "violating-vector"
    assert quadratic_form(m, w.vector) == w.value < 0


def test_psd_zero_pivot_with_offdiagonal():
    w = rational_psd_check(G([0, 1], [1, 0]))
    assert not w.is_psd and w.value < 0
    w = rational_psd_check(G([0, 0], [0, 1]))
    assert w.is_psd and w.rank == 1


def test_psd_complex_semidefinite():
    i = GaussQ(0, 1)
    m = [[ONE, i], [-i, ONE]]  # rank one: v v^H with v = (1, -i)
    w = rational_psd_check(m)
    assert w.is_psd and w.rank == 1
    assert w.reconstruct() == m


def test_solve_linear_examples():
    s = solve_linear_exact(G([1, 0], [0, 1]), [ONE, ZERO])
    assert s.kind == "unique" and s.particular == (ONE, ZERO)
    s = solve_linear_exact(G([1, 1]), [ZERO])
    assert s.kind == "family"
    assert s.kernel == ((ONE, -ONE),)
    s = solve_linear_exact(G([1, 1], [1, 1]), [ONE, ZERO])
    assert not s.consistent


def test_solve_linear_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_linear_exact(G([1, 1]), [ONE, ONE])


def test_exact_matmul_identity():
    a = G([1, 2], [3, 4])
    assert exact_matmul(a, G([1, 0], [0, 1])) == a
