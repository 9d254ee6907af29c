import numpy as np
import pytest
import scipy.sparse as sp

from sepsos.repro import fixture_sdp_problems
from sepsos.sdp import SdpProblem, check_outcome, minimize, solve


def unit(i, j, n):
    m = np.zeros((n, n))
    m[i, j] = m[j, i] = 1.0
    return m


def test_trace_forced_is_feasible():
    prob = SdpProblem(2, [(np.eye(2), 1.0), (unit(0, 0, 2), 1.0)])
    out = solve(prob, seed=0)
    assert out.status == "feasible" and check_outcome(prob, out)
    assert np.allclose(out.X, [[1, 0], [0, 0]], atol=1e-6)


def test_negative_diagonal_is_infeasible():
    prob = SdpProblem(1, [(unit(0, 0, 1), -1.0)])
    out = solve(prob, seed=0)
    assert out.status == "infeasible" and check_outcome(prob, out)
    assert out.ray is not None and out.X is None


def test_off_diagonal_conflict_is_infeasible():
    # X11 = X22 = 1 and X12 = 2 violates the 2x2 minor
    prob = SdpProblem(2, [(unit(0, 0, 2), 1.0), (unit(1, 1, 2), 1.0), (unit(0, 1, 2) / 2, 2.0)])
    out = solve(prob, seed=0)
    assert out.status == "infeasible" and check_outcome(prob, out)


def test_minimize_small_problem():
    C = np.array([[2.0, 1.0], [1.0, 2.0]])
    prob = SdpProblem(2, [(np.eye(2), 1.0)], C)
    out = minimize(prob, seed=0)
    assert out.status == "optimal"
    assert abs(out.value - 1.0) <= 1e-7
    assert out.margins["gap"] <= 1e-7


def test_minimize_agrees_with_cvxpy():
    cp = pytest.importorskip("cvxpy")
    rng = np.random.default_rng(3)
    n = 4
    a = rng.standard_normal((n, n))
    C = a + a.T
    b1 = rng.standard_normal((n, n))
    A1 = b1 + b1.T
    prob = SdpProblem(n, [(np.eye(n), 1.0), (A1, 0.0)], C)
    ours = minimize(prob, seed=0)
    X = cp.Variable((n, n), symmetric=True)
    ref = cp.Problem(cp.Minimize(cp.trace(C @ X)), [X >> 0, cp.trace(X) == 1, cp.trace(A1 @ X) == 0])
    ref.solve(solver="CLARABEL")
    assert ours.status == "optimal"
    assert abs(ours.value - ref.value) <= 1e-6 * max(1.0, abs(ref.value))


def test_complex_constraint():
    # tr(A X) = -Im X12 = 1/2 with trace 1 forces X12 = -i/2
    a = np.array([[0, -0.5j], [0.5j, 0]])
    prob = SdpProblem(2, [(np.eye(2), 1.0), (a, 0.5)])
    out = solve(prob, seed=0)
    assert out.status == "feasible" and check_outcome(prob, out)
    assert abs(out.X[0, 1] + 0.5j) <= 1e-5


def test_solver_is_deterministic():
    prob = fixture_sdp_problems()["identity-2"]
    a = solve(prob, seed=0)
    b = solve(prob, seed=123)
    assert a.status == b.status
    assert np.array_equal(a.X, b.X)


@pytest.mark.parametrize("name", ["trace-forced", "negative-diagonal", "identity-2", "transpose-2",
                                  "appendix-q-cert-basis", "appendix-p", "choi"])
def test_fixture_statuses_reverify(name):
    prob = fixture_sdp_problems()[name]
    out = solve(prob, seed=0)
    assert out.status != "indeterminate"
    assert check_outcome(prob, out)


@pytest.mark.parametrize("name", ["trace-forced", "negative-diagonal", "identity-2", "appendix-q-cert-basis"])
def test_scale_robustness(name):
    prob = fixture_sdp_problems()[name]
    base = solve(prob, seed=0).status
    big = prob.scaled(1e3)
    out = solve(big, seed=0)
    assert out.status == base
    assert check_outcome(big, out)


def test_problem_validation():
    with pytest.raises(ValueError):
        SdpProblem(2, [(np.eye(3), 1.0)])
    with pytest.raises(ValueError):
        SdpProblem(2, [(np.array([[0, 1.0], [0, 0]]), 1.0)])
    rows = sp.csr_matrix(np.array([[1.0, 0, 0, 1]]))
    prob = SdpProblem.from_operator(2, rows, [1.0])
    assert prob.m == 1 and solve(prob).status == "feasible"
