import numpy as np
import pytest

from sepsos import kernels


def random_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    return np.ascontiguousarray(a + a.T)


def test_backend_is_named():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("n", [1, 2, 5, 12, 30])
def test_backends_agree(n):
    a = random_symmetric(n, n)
    fast, _ = kernels.jacobi_eigenvalues(a)
    slow, _ = kernels.python_jacobi_eigenvalues(a)
    ref = np.linalg.eigvalsh(a)
    scale = max(1.0, np.abs(ref).max())
    assert np.abs(np.sort(fast) - np.sort(slow)).max() <= 1e-12 * scale
    assert np.abs(np.sort(fast) - ref).max() <= 1e-12 * scale


def test_small_examples():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    for f in (kernels.jacobi_eigenvalues, kernels.python_jacobi_eigenvalues):
        vals, sweeps = f(a)
        assert np.allclose(sorted(vals), [1.0, 3.0])
        assert sweeps >= 1
        vals, sweeps = f(np.zeros((3, 3)))
        assert list(vals) == [0.0, 0.0, 0.0] and sweeps == 0
