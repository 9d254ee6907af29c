"""Compare the compiled Jacobi eigenvalue kernel with the pure-Python fallback.

Usage: python benchmarks/bench_jacobi.py [--sizes 8 16 32 64] [--repeat 5]
"""

import argparse
import time

import numpy as np

from sepsos import kernels
from sepsos._jacobi_py import jacobi_eigenvalues as py_jacobi


def _time(fn, a, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        vals, _ = fn(a)
        best = min(best, time.perf_counter() - t)
    return best, np.asarray(vals)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    try:
        from sepsos._jacobi import jacobi_eigenvalues as cy_jacobi
    except ImportError:
        cy_jacobi = None
    rng = np.random.default_rng(args.seed)
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'n':>4} {'python [s]':>12} {'cython [s]':>12} {'speedup':>9} {'max |diff|':>11}")
    for n in args.sizes:
        b = rng.standard_normal((n, n))
        a = (b + b.T) / 2
        tp, vp = _time(py_jacobi, a, args.repeat)
        if cy_jacobi is None:
            print(f"{n:>4} {tp:>12.5f} {'n/a':>12} {'n/a':>9} {'n/a':>11}")
            continue
        tc, vc = _time(cy_jacobi, a, args.repeat)
        ref = np.linalg.eigvalsh(a)
        diff = max(np.max(np.abs(vp - ref)), np.max(np.abs(vc - ref)))
        print(f"{n:>4} {tp:>12.5f} {tc:>12.5f} {tp / tc:>8.1f}x {diff:>11.2e}")


if __name__ == "__main__":
    main()
