"""Hot-kernel dispatch: the compiled extension when built, else pure Python.

``BACKEND`` names the implementation chosen at import time.
"""

from . import _jacobi_py

try:  # pragma: no cover - depends on the build
    from ._jacobi import jacobi_eigenvalues
    BACKEND = "cython"
except ImportError:  # pragma: no cover
    from ._jacobi_py import jacobi_eigenvalues
    BACKEND = "python"

python_jacobi_eigenvalues = _jacobi_py.jacobi_eigenvalues

__all__ = ["jacobi_eigenvalues", "python_jacobi_eigenvalues", "BACKEND"]
