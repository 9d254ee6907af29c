"""Exact constructions of the concrete objects used throughout the package.

The Ha-Kye map is built from its matrix formula; the biquadratic form ``W``
and its dehomogenizations are derived from it rather than transcribed.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import HermitianMatrix
from .maps import MatrixMap, map_to_biquadratic
from .poly import HermitianPolynomial, Poly, dehomogenize
from .scalars import GaussQ, ONE, ZERO
from .sos import GramCertificate
from .zeros import ZeroCurve

__all__ = [
    "FIXTURES",
    "fixture_names",
    "get_fixture",
    "hakye_map",
    "hakye_W",
    "choi_polynomial",
    "choi_dehom",
    "appendix_p",
    "appendix_q",
    "zero_curve",
    "cert_A",
    "cert_B",
    "cert_monomials",
    "appendix_certificate",
]


def _hakye_image(x, y, z, w):
    """The 4x4 image of [[x, y], [z, w]]."""
    return [
        [3 * w + 4 * x - 2 * y - 2 * z, 2 * z - 2 * x, 0, 0],
        [2 * y - 2 * x, 2 * x, z, 0],
        [0, y, 2 * w, -w - 2 * z],
        [0, 0, -w - 2 * y, 2 * w + 4 * x],
    ]


def hakye_map() -> MatrixMap:
    """The positive, non-decomposable map ``M_2 -> M_4`` (output-first orientation)."""
    units = {(0, 0): (1, 0, 0, 0), (0, 1): (0, 1, 0, 0), (1, 0): (0, 0, 1, 0), (1, 1): (0, 0, 0, 1)}
    images = [[_hakye_image(*units[(i, j)]) for j in range(2)] for i in range(2)]
    return MatrixMap.from_unit_images(2, 4, images, "exact", orientation="output_first")


def hakye_W() -> HermitianPolynomial:
    """``W(x, y) = x^H Phi(y y^H) x`` with ``x`` in C^4 and ``y`` in C^2."""
    return map_to_biquadratic(hakye_map(), "output_first")


def appendix_p() -> HermitianPolynomial:
    """``W(1, x2, x3, x4, 1, y2)``."""
    return dehomogenize(hakye_W(), {"x1": 1, "y1": 1})


def appendix_q() -> HermitianPolynomial:
    """``W(x1, x2, -6, x4, 1, y2)``."""
    return dehomogenize(hakye_W(), {"x3": -6, "y1": 1})


def choi_polynomial() -> HermitianPolynomial:
    """The (3,3) Choi form; ``-2 Re[w]`` contributes ``-1`` to both ``w`` and ``conj w``."""
    n = 6
    names = ("x1", "x2", "x3", "y1", "y2", "y3")
    blocks = [("x", (0, 1, 2)), ("y", (3, 4, 5))]
    terms: dict = {}

    def e(*idx):
        t = [0] * n
        for i in idx:
            t[i] += 1
        return tuple(t)

    def add(u, v, c):
        terms[(u, v)] = terms.get((u, v), ZERO) + GaussQ(c)

    X = (0, 1, 2)
    Y = (3, 4, 5)
    for i in range(3):
        add(e(X[i], Y[i]), e(X[i], Y[i]), 1)
    for i, j in [(0, 1), (1, 2), (0, 2)]:
        u = e(X[i], Y[i])
        v = e(X[j], Y[j])
        add(u, v, -1)
        add(v, u, -1)
    for i, k in [(0, 1), (1, 2), (2, 0)]:
        add(e(X[i], Y[k]), e(X[i], Y[k]), 2)
    return HermitianPolynomial(n, terms, "exact", names, blocks)


def choi_dehom() -> HermitianPolynomial:
    """``p(x1, x2, 1, y1, y2, 1)``."""
    return dehomogenize(choi_polynomial(), {"x3": 1, "y3": 1})


def zero_curve() -> ZeroCurve:
    """Zeros of ``W`` at ``(x(a), 1, a)`` for every complex ``a``.

    Components follow W's variables ``(x1, x2, x3, x4, y1, y2)``.  The chart
    ``(1, 2, 3, 5)`` reads the curve in the variables of :func:`appendix_p`,
    dividing the x-block by ``x1(a)``.
    """
    A = ((1,), (0,))

    def mono(k, l):
        return ((k,), (l,))

    def poly(d):
        return Poly(1, {m: GaussQ(c) for m, c in d.items()}, "exact", ("alpha",))

    x1 = poly({mono(1, 0): 2, mono(2, 0): -2})
    x2 = poly({mono(1, 0): 4, mono(2, 0): -2, mono(1, 1): -2, mono(2, 1): 3})
    x3 = poly({mono(0, 0): -4, mono(1, 1): -2})
    x4 = poly({mono(0, 1): -2, mono(1, 1): -1})
    y1 = poly({mono(0, 0): 1})
    y2 = poly({A: 1})
    return ZeroCurve((x1, x2, x3, x4, y1, y2), 0, (GaussQ(0), GaussQ(1)),
                     ((0, 1, 2, 3), (4, 5)), (1, 2, 3, 5))


def cert_monomials() -> tuple:
    """``(a, x1, x2, x4, conj(a) x1, conj(a) x4)`` over the variables of :func:`appendix_q`."""
    q = appendix_q()
    n = q.nvars
    idx = {name: q.names.index(name) for name in ("x1", "x2", "x4", "y2")}

    def m(hol=(), anti=()):
        u = [0] * n
        v = [0] * n
        for name in hol:
            u[idx[name]] += 1
        for name in anti:
            v[idx[name]] += 1
        return (tuple(u), tuple(v))

    return (m(("y2",)), m(("x1",)), m(("x2",)), m(("x4",)), m(("x1",), ("y2",)), m(("x4",), ("y2",)))


def _gmat(rows):
    return [[GaussQ(Fraction(x)) for x in row] for row in rows]


def cert_A():
    return _gmat([
        [36, 0, -3, 0, 0, 0],
        [0, 2, -1, 0, -1, 0],
        [-3, -1, 1, 0, 1, 0],
        [0, 0, 0, 2, 0, 0],
        [0, -1, 1, 0, Fraction(3, 2), 0],
        [0, 0, 0, 0, 0, 1],
    ])


def cert_B():
    return _gmat([
        [0, 0, 0, 6, 0, 3],
        [0, 0, 0, 0, 0, -1],
        [0, 0, 0, 0, 0, 0],
        [6, 0, 0, 0, 1, 0],
        [0, 0, 0, 1, 0, 0],
        [3, -1, 0, 0, 0, 0],
    ])


def appendix_certificate() -> GramCertificate:
    return GramCertificate(appendix_q().nvars, cert_monomials(), cert_A(), cert_B(), "exact")


FIXTURES = {
    "choi_polynomial": choi_polynomial,
    "choi_dehom": choi_dehom,
    "hakye_map": hakye_map,
    "hakye_W": hakye_W,
    "appendix_p": appendix_p,
    "appendix_q": appendix_q,
    "zero_curve": zero_curve,
    "cert_A": lambda: HermitianMatrix(cert_A(), "exact"),
    "cert_B": cert_B,
    "cert_monomials": cert_monomials,
    "appendix_certificate": appendix_certificate,
}


def fixture_names() -> list[str]:
    return sorted(FIXTURES)


def get_fixture(name: str):
    key = name.replace("-", "_")
    if key not in FIXTURES:
        # case-insensitive fallback (hakye-w -> hakye_W)
        lowered = {k.lower(): k for k in FIXTURES}
        if key.lower() not in lowered:
            raise KeyError(f"unknown fixture {name!r}")
        key = lowered[key.lower()]
    return FIXTURES[key]()
