"""Exact Gaussian rationals and scalar parsing/formatting.

A Gaussian rational is a pair of :class:`fractions.Fraction` (real part,
imaginary part).  Every operation used by the package (ring operations,
division, conjugation) stays inside this set, so exact computations never
need a square root.
"""

from __future__ import annotations

import numbers
from decimal import Decimal
from fractions import Fraction

__all__ = [
    "GaussQ",
    "as_gauss",
    "as_fraction",
    "parse_scalar",
    "format_fraction",
    "format_float",
    "round_fraction",
    "round_gauss",
]


class GaussQ:
    """Immutable Gaussian rational ``re + i*im`` with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussQ is immutable")

    def __reduce__(self):
        return (GaussQ, (self.re, self.im))

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    @staticmethod
    def _raw(re: Fraction, im: Fraction) -> "GaussQ":
        g = object.__new__(GaussQ)
        object.__setattr__(g, "re", re)
        object.__setattr__(g, "im", im)
        return g

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = as_gauss(other)
        return GaussQ._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_gauss(other)
        return GaussQ._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return as_gauss(other) - self

    def __mul__(self, other):
        o = as_gauss(other)
        if not self.im and not o.im:
            return GaussQ._raw(self.re * o.re, _ZERO)
        return GaussQ._raw(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = as_gauss(other)
        if not o.im:
            if not o.re:
                raise ZeroDivisionError("division by zero Gaussian rational")
            return GaussQ._raw(self.re / o.re, self.im / o.re)
        den = o.re * o.re + o.im * o.im
        return GaussQ._raw(
            (self.re * o.re + self.im * o.im) / den, (self.im * o.re - self.re * o.im) / den
        )

    def __rtruediv__(self, other):
        return as_gauss(other) / self

    def __neg__(self):
        return GaussQ._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "GaussQ":
        return GaussQ._raw(self.re, -self.im)

    conj = conjugate

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        try:
            o = as_gauss(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return f"GaussQ({format_fraction(self.re)})"
        return f"GaussQ({format_fraction(self.re)}, {format_fraction(self.im)})"

    def __str__(self):
        if not self.im:
            return format_fraction(self.re)
        sign = "+" if self.im > 0 else "-"
        return f"{format_fraction(self.re)}{sign}{format_fraction(abs(self.im))}i"


_ZERO = Fraction(0)
ZERO = GaussQ._raw(Fraction(0), Fraction(0))
ONE = GaussQ._raw(Fraction(1), Fraction(0))
I = GaussQ._raw(Fraction(0), Fraction(1))


def as_fraction(x) -> Fraction:
    """Convert an exact real scalar (int, Fraction, 'p/q' or decimal string) to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, Decimal):
        return Fraction(x)
    if isinstance(x, GaussQ):
        if x.im:
            raise ValueError("expected a real scalar, got a complex one")
        return x.re
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def as_gauss(x) -> GaussQ:
    """Convert an exact scalar to :class:`GaussQ`.  Floats are rejected."""
    if isinstance(x, GaussQ):
        return x
    if isinstance(x, (float, complex)) and not isinstance(x, bool):
        raise TypeError("floating scalars are not exact; rationalize them first")
    if isinstance(x, tuple) and len(x) == 2:
        return GaussQ(as_fraction(x[0]), as_fraction(x[1]))
    return GaussQ._raw(as_fraction(x), _ZERO)


def parse_scalar(re: str | None, im: str | None = None, regime: str = "exact"):
    """Parse the JSON scalar pair used by all file formats.

    In the exact regime the strings must be integers, ``p/q`` or finite
    decimals; the result is a :class:`GaussQ`.  In the floating regime the
    result is a Python ``complex``.
    """
    re = "0" if re is None else str(re)
    im = "0" if im is None else str(im)
    if regime == "exact":
        return GaussQ(Fraction(re), Fraction(im))
    if regime == "float":
        return complex(float(Fraction(re)) if "/" in re else float(re),
                       float(Fraction(im)) if "/" in im else float(im))
    raise ValueError(f"unknown regime {regime!r}")


def format_fraction(q: Fraction) -> str:
    """Format as ``p`` or ``p/q``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_float(x: float) -> str:
    return repr(float(x))


def round_fraction(x: float, bound: int) -> Fraction:
    """Best rational approximation of ``x`` with denominator at most ``bound``."""
    return Fraction(x).limit_denominator(bound)


def round_gauss(z: complex, bound: int) -> GaussQ:
    z = complex(z)
    return GaussQ._raw(round_fraction(z.real, bound), round_fraction(z.imag, bound))
