"""Sparse polynomials in complex variables and their conjugates.

A monomial is an exponent pair ``(u, v)`` of equal-length tuples standing
for ``z^u * conj(z)^v``.  :class:`Poly` is an arbitrary sparse polynomial in
``(z, conj z)``; :class:`HermitianPolynomial` adds the symmetry
``c[u, v] == conj(c[v, u])`` that makes it real valued.  :class:`RealPolynomial`
holds ordinary real polynomials (realifications and real restrictions).

Coefficients live in one regime per polynomial: ``"exact"`` (GaussQ) or
``"float"`` (complex).  Mixing regimes raises.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .scalars import GaussQ, ONE, ZERO, as_gauss, format_fraction, parse_scalar

__all__ = [
    "Monomial",
    "term_key",
    "conj_monomial",
    "monomial_product",
    "Poly",
    "HermitianPolynomial",
    "RealPolynomial",
    "SupportSet",
    "evaluate",
    "add",
    "multiply",
    "conjugate_square",
    "realify",
    "real_restriction",
    "dehomogenize",
    "homogenize",
    "support",
    "is_downward_closed",
    "downward_closure",
    "monomial_map",
    "block_support",
    "homogenize_pair",
]

Monomial = tuple  # (u, v) with u, v tuples of nonnegative ints
EVAL_IMAG_TOL = 1e-10
FLOAT_SYM_TOL = 1e-12


def term_key(m: Monomial):
    """Graded lexicographic key on the concatenation ``u + v``."""
    u, v = m
    e = tuple(u) + tuple(v)
    return (sum(e), tuple(-x for x in e))


def conj_monomial(m: Monomial) -> Monomial:
    return (m[1], m[0])


def monomial_product(a: Monomial, b: Monomial) -> Monomial:
    return (
        tuple(x + y for x, y in zip(a[0], b[0])),
        tuple(x + y for x, y in zip(a[1], b[1])),
    )


def _zero_of(regime):
    return ZERO if regime == "exact" else 0j


def _coerce(c, regime):
    if regime == "exact":
        return as_gauss(c)
    if isinstance(c, GaussQ):
        raise TypeError("exact coefficient given to a floating polynomial")
    return complex(c)


def _conj(c):
    return c.conjugate()


def _is_zero(c) -> bool:
    return not c


def _default_blocks(nvars):
    return ((None, tuple(range(nvars))),) if nvars else ()


class Poly:
    """Sparse polynomial ``sum c[u,v] z^u conj(z)^v`` with no symmetry requirement."""

    __slots__ = ("nvars", "terms", "regime", "names", "blocks")

    def __init__(
        self,
        nvars: int,
        terms: Mapping | Iterable = (),
        regime: str = "exact",
        names: Sequence[str] | None = None,
        blocks: Sequence | None = None,
    ):
        if regime not in ("exact", "float"):
            raise ValueError(f"unknown regime {regime!r}")
        self.nvars = int(nvars)
        self.regime = regime
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        zero = _zero_of(regime)
        for (u, v), c in items:
            u = tuple(int(x) for x in u)
            v = tuple(int(x) for x in v)
            if len(u) != self.nvars or len(v) != self.nvars:
                raise ValueError("exponent length does not match nvars")
            if any(x < 0 for x in u + v):
                raise ValueError("negative exponent")
            c = _coerce(c, regime)
            key = (u, v)
            acc[key] = acc.get(key, zero) + c
        self.terms = {k: acc[k] for k in sorted(acc, key=term_key) if not _is_zero(acc[k])}
        if names is None:
            names = tuple(f"z{i + 1}" for i in range(self.nvars))
        self.names = tuple(names)
        if len(self.names) != self.nvars:
            raise ValueError("names length does not match nvars")
        self.blocks = _normalize_blocks(blocks, self.nvars)

    # construction helpers -------------------------------------------------
    def _like(self, terms, cls=None, **kw):
        cls = cls or type(self)
        return cls(
            kw.get("nvars", self.nvars),
            terms,
            kw.get("regime", self.regime),
            kw.get("names", self.names),
            kw.get("blocks", self.blocks),
        )

    @classmethod
    def constant(cls, nvars, c, regime="exact", **kw):
        z = (0,) * nvars
        return cls(nvars, {(z, z): c}, regime, **kw)

    @classmethod
    def variable(cls, nvars, i, conjugate=False, regime="exact", **kw):
        e = tuple(1 if j == i else 0 for j in range(nvars))
        z = (0,) * nvars
        key = (z, e) if conjugate else (e, z)
        return cls(nvars, {key: ONE if regime == "exact" else 1.0}, regime, **kw)

    def coefficient(self, u, v=None):
        if v is None:
            u, v = u
        return self.terms.get((tuple(u), tuple(v)), _zero_of(self.regime))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(u) + sum(v) for u, v in self.terms), default=0)

    def var_index(self, key) -> int:
        if isinstance(key, int):
            if not 0 <= key < self.nvars:
                raise KeyError(f"unknown variable index {key}")
            return key
        try:
            return self.names.index(key)
        except ValueError:
            raise KeyError(f"unknown variable {key!r}") from None

    def block_of(self, i: int):
        for name, idx in self.blocks:
            if i in idx:
                return name
        return None

    # arithmetic ---------------------------------------------------------------
    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("polynomials have different numbers of variables")
        if self.regime != other.regime:
            raise TypeError("mixed-regime arithmetic is not allowed")

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        zero = _zero_of(self.regime)
        for k, c in other.terms.items():
            t[k] = t.get(k, zero) + c
        return self._like(t, cls=_join_cls(self, other))

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = _coerce(s, self.regime)
        cls = type(self)
        if cls is HermitianPolynomial and (s.imag if not isinstance(s, GaussQ) else s.im):
            cls = Poly
        return self._like({k: c * s for k, c in self.terms.items()}, cls=cls)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        zero = _zero_of(self.regime)
        t: dict = {}
        for (u1, v1), c1 in self.terms.items():
            for (u2, v2), c2 in other.terms.items():
                k = (
                    tuple(a + b for a, b in zip(u1, u2)),
                    tuple(a + b for a, b in zip(v1, v2)),
                )
                t[k] = t.get(k, zero) + c1 * c2
        return self._like(t, cls=_join_cls(self, other))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = type(self).constant(self.nvars, 1, self.regime, names=self.names, blocks=self.blocks)
        for _ in range(k):
            out = out * self
        return out

    def conj(self) -> "Poly":
        """The polynomial ``conj(p(z))`` written in ``(z, conj z)``."""
        return self._like({(v, u): _conj(c) for (u, v), c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.regime == other.regime
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    def __repr__(self):
        return f"{type(self).__name__}(nvars={self.nvars}, terms={len(self.terms)}, regime={self.regime!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (u, v), c in self.terms.items():
            mono = monomial_str((u, v), self.names)
            cs = str(c) if self.regime == "exact" else f"{c:g}"
            parts.append(f"({cs})*{mono}" if mono != "1" else f"({cs})")
        return " + ".join(parts)

    # evaluation / substitution ----------------------------------------------
    def evaluate_complex(self, z) -> complex:
        z = [complex(x) for x in z]
        if len(z) != self.nvars:
            raise ValueError("point dimension does not match nvars")
        zc = [x.conjugate() for x in z]
        total = 0j
        for (u, v), c in self.terms.items():
            t = complex(c)
            for i in range(self.nvars):
                if u[i]:
                    t *= z[i] ** u[i]
                if v[i]:
                    t *= zc[i] ** v[i]
            total += t
        return total

    def evaluate_exact(self, z) -> GaussQ:
        z = [as_gauss(x) for x in z]
        if len(z) != self.nvars:
            raise ValueError("point dimension does not match nvars")
        zc = [x.conjugate() for x in z]
        total = ZERO
        for (u, v), c in self.terms.items():
            t = as_gauss(c)
            for i in range(self.nvars):
                if u[i]:
                    t = t * z[i] ** u[i]
                if v[i]:
                    t = t * zc[i] ** v[i]
            total = total + t
        return total

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Compose: replace ``z_i`` by ``images[i]`` and ``conj z_i`` by its conjugate."""
        if len(images) != self.nvars:
            raise ValueError("need one image polynomial per variable")
        if not images:
            return self
        base = images[0]
        for img in images:
            if img.nvars != base.nvars or img.regime != self.regime:
                raise ValueError("image polynomials must share nvars and regime")
        img = [Poly(q.nvars, q.terms, q.regime, q.names, q.blocks) for q in images]
        cimg = [q.conj() for q in img]
        one = Poly.constant(base.nvars, 1, self.regime, names=base.names, blocks=base.blocks)
        cache: dict = {}

        def power(i, k, conj):
            key = (i, k, conj)
            if key not in cache:
                if k == 0:
                    cache[key] = one
                else:
                    cache[key] = power(i, k - 1, conj) * (cimg[i] if conj else img[i])
            return cache[key]

        out = Poly(base.nvars, {}, self.regime, base.names, base.blocks)
        for (u, v), c in self.terms.items():
            t = one.scale(c)
            for i in range(self.nvars):
                if u[i]:
                    t = t * power(i, u[i], False)
                if v[i]:
                    t = t * power(i, v[i], True)
            out = out + t
        return out

    # serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        terms = []
        for (u, v), c in self.terms.items():
            if self.regime == "exact":
                re, im = format_fraction(c.re), format_fraction(c.im)
            else:
                re, im = repr(c.real), repr(c.imag)
            terms.append({"u": list(u), "v": list(v), "re": re, "im": im})
        return {
            "nvars": self.nvars,
            "names": list(self.names),
            "blocks": [list(idx) for _, idx in self.blocks],
            "block_names": [name for name, _ in self.blocks],
            "regime": self.regime,
            "terms": terms,
        }

    @classmethod
    def from_json(cls, data: Mapping):
        nvars = int(data["nvars"])
        regime = data.get("regime", "exact")
        terms = []
        for t in data.get("terms", []):
            c = parse_scalar(t.get("re"), t.get("im"), regime)
            terms.append(((tuple(t["u"]), tuple(t["v"])), c))
        blocks = data.get("blocks")
        if blocks is not None:
            bnames = data.get("block_names") or [None] * len(blocks)
            blocks = list(zip(bnames, blocks))
        return cls(nvars, terms, regime, data.get("names"), blocks)


def _join_cls(a, b):
    if type(a) is HermitianPolynomial and type(b) is HermitianPolynomial:
        return HermitianPolynomial
    return Poly


def _normalize_blocks(blocks, nvars):
    if blocks is None:
        return _default_blocks(nvars)
    out = []
    seen = set()
    for b in blocks:
        if isinstance(b, tuple) and len(b) == 2 and not isinstance(b[1], int):
            name, idx = b
        else:
            name, idx = None, b
        idx = tuple(int(i) for i in idx)
        for i in idx:
            if not 0 <= i < nvars or i in seen:
                raise ValueError("blocks must be disjoint variable index sets")
            seen.add(i)
        out.append((name, idx))
    return tuple(out)


def monomial_str(m: Monomial, names: Sequence[str]) -> str:
    u, v = m
    parts = []
    for i, n in enumerate(names):
        if u[i]:
            parts.append(n if u[i] == 1 else f"{n}^{u[i]}")
        if v[i]:
            parts.append(f"conj({n})" if v[i] == 1 else f"conj({n})^{v[i]}")
    return "*".join(parts) or "1"


class HermitianPolynomial(Poly):
    """Real-valued polynomial: coefficient at ``(u, v)`` is the conjugate of that at ``(v, u)``.

    Asymmetric input is rejected rather than completed.  In the floating
    regime a mismatch up to ``1e-12`` is tolerated and averaged away.
    """

    __slots__ = ()

    def __init__(self, nvars, terms=(), regime="exact", names=None, blocks=None):
        super().__init__(nvars, terms, regime, names, blocks)
        zero = _zero_of(regime)
        fixed = {}
        for (u, v), c in self.terms.items():
            other = self.terms.get((v, u), zero)
            if regime == "exact":
                if c != other.conjugate():
                    raise ValueError(
                        f"coefficients at {monomial_str((u, v), self.names)} and its conjugate "
                        "monomial are not conjugate"
                    )
            else:
                if abs(c - other.conjugate()) > FLOAT_SYM_TOL * max(1.0, abs(c)):
                    raise ValueError("floating polynomial is not Hermitian within tolerance")
                fixed[(u, v)] = 0.5 * (c + other.conjugate())
        if regime == "float":
            self.terms = {k: c for k, c in fixed.items() if c != 0}

    @classmethod
    def from_poly(cls, p: Poly) -> "HermitianPolynomial":
        return cls(p.nvars, p.terms, p.regime, p.names, p.blocks)

    def evaluate(self, z) -> float | Fraction:
        return evaluate(self, z)


class RealPolynomial:
    """Sparse real polynomial ``sum c[e] x^e`` with Fraction or float coefficients."""

    __slots__ = ("nvars", "terms", "regime", "names")

    def __init__(self, nvars, terms=(), regime="exact", names=None):
        self.nvars = int(nvars)
        self.regime = regime
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars:
                raise ValueError("exponent length does not match nvars")
            if regime == "exact":
                if isinstance(c, GaussQ):
                    if c.im:
                        raise ValueError("real polynomial with a complex coefficient")
                    c = c.re
                c = Fraction(c)
            else:
                if isinstance(c, complex):
                    c = c.real
                c = float(c)
            acc[e] = acc.get(e, 0) + c
        self.terms = {
            e: acc[e] for e in sorted(acc, key=lambda e: (sum(e), tuple(-x for x in e))) if acc[e]
        }
        self.names = tuple(names) if names is not None else tuple(f"x{i + 1}" for i in range(self.nvars))

    def evaluate(self, x):
        x = list(x)
        if len(x) != self.nvars:
            raise ValueError("point dimension does not match nvars")
        total = 0
        for e, c in self.terms.items():
            t = c
            for xi, k in zip(x, e):
                if k:
                    t = t * xi**k
            total = total + t
        return total

    def coefficient(self, e):
        return self.terms.get(tuple(e), 0)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __add__(self, other):
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return RealPolynomial(self.nvars, t, self.regime, self.names)

    def __neg__(self):
        return RealPolynomial(self.nvars, {e: -c for e, c in self.terms.items()}, self.regime, self.names)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, RealPolynomial):
            return RealPolynomial(self.nvars, {e: c * other for e, c in self.terms.items()}, self.regime, self.names)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return RealPolynomial(self.nvars, t, self.regime, self.names)

    def __eq__(self, other):
        if not isinstance(other, RealPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    def __repr__(self):
        return f"RealPolynomial(nvars={self.nvars}, terms={len(self.terms)}, regime={self.regime!r})"

    def to_json(self) -> dict:
        fmt = format_fraction if self.regime == "exact" else repr
        return {
            "kind": "real",
            "nvars": self.nvars,
            "names": list(self.names),
            "regime": self.regime,
            "terms": [{"e": list(e), "c": fmt(c)} for e, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data):
        regime = data.get("regime", "exact")
        conv = Fraction if regime == "exact" else float
        terms = [(tuple(t["e"]), conv(t["c"])) for t in data["terms"]]
        return cls(int(data["nvars"]), terms, regime, data.get("names"))


# ---------------------------------------------------------------------------
# operations


def evaluate(p: HermitianPolynomial, z):
    """Value of a Hermitian polynomial at ``z``; real by construction.

    Exact polynomials evaluated at exact points return a Fraction.  Otherwise
    the floating imaginary residue must stay below ``1e-10`` times the sum of
    term magnitudes and is then discarded.
    """
    if len(z) != p.nvars:
        raise ValueError("point dimension does not match nvars")
    if p.regime == "exact" and all(isinstance(x, (int, Fraction, GaussQ)) for x in z):
        val = p.evaluate_exact(z)
        if val.im:
            raise ValueError("imaginary residue in exact evaluation: broken Hermitian symmetry")
        return val.re
    z = [complex(x) for x in z]
    zc = [x.conjugate() for x in z]
    total = 0j
    mag = 0.0
    for (u, v), c in p.terms.items():
        t = complex(c)
        for i in range(p.nvars):
            if u[i]:
                t *= z[i] ** u[i]
            if v[i]:
                t *= zc[i] ** v[i]
        total += t
        mag += abs(t)
    if abs(total.imag) > EVAL_IMAG_TOL * max(mag, 1e-300) and abs(total.imag) > 0:
        raise ValueError("imaginary residue above tolerance: broken Hermitian symmetry")
    return total.real


def add(p: Poly, q: Poly) -> Poly:
    return p + q


def multiply(p: Poly, q: Poly) -> Poly:
    return p * q


def conjugate_square(g: HermitianPolynomial) -> HermitianPolynomial:
    """``g * g`` for Hermitian ``g`` (equal to ``g * conj(g)``)."""
    if not isinstance(g, HermitianPolynomial):
        g = HermitianPolynomial.from_poly(g)
    return g * g


def _binom_expand(u: int, v: int, regime):
    """``(a + ib)^u (a - ib)^v`` as ``{(s, t): coeff}``."""
    out: dict = {}
    for k in range(u + 1):
        for l in range(v + 1):
            c = math.comb(u, k) * math.comb(v, l)
            # i^k (-i)^l = i^(k + 3l)
            r = (k + 3 * l) % 4
            unit = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}[r]
            key = (u + v - k - l, k + l)
            val = GaussQ(c * unit[0], c * unit[1]) if regime == "exact" else complex(c * unit[0], c * unit[1])
            out[key] = out.get(key, _zero_of(regime)) + val
    return out


def realify(p: Poly) -> RealPolynomial:
    """``P(a, b) = p(a + ib)`` in the real variables ``(a_1..a_n, b_1..b_n)``."""
    n = p.nvars
    regime = p.regime
    acc: dict = {}
    cache: dict = {}
    for (u, v), c in p.terms.items():
        partial = {((0,) * n, (0,) * n): c}
        for i in range(n):
            if not u[i] and not v[i]:
                continue
            key = (u[i], v[i])
            if key not in cache:
                cache[key] = _binom_expand(u[i], v[i], regime)
            exp = cache[key]
            nxt: dict = {}
            for (s, t), cc in partial.items():
                for (ds, dt), ec in exp.items():
                    s2 = s[:i] + (s[i] + ds,) + s[i + 1:]
                    t2 = t[:i] + (t[i] + dt,) + t[i + 1:]
                    k2 = (s2, t2)
                    nxt[k2] = nxt.get(k2, _zero_of(regime)) + cc * ec
            partial = nxt
        for (s, t), cc in partial.items():
            e = s + t
            acc[e] = acc.get(e, _zero_of(regime)) + cc
    out = {}
    scale = sum(abs(complex(c)) for c in acc.values()) or 1.0
    for e, c in acc.items():
        if regime == "exact":
            if c.im:
                raise ValueError("nonzero imaginary coefficient after realification")
            if c.re:
                out[e] = c.re
        else:
            if abs(c.imag) > 1e-10 * scale:
                raise ValueError("nonzero imaginary coefficient after realification")
            if c.real != 0:
                out[e] = c.real
    names = tuple(f"Re({x})" for x in p.names) + tuple(f"Im({x})" for x in p.names)
    return RealPolynomial(2 * n, out, regime, names)


def real_restriction(p: Poly) -> RealPolynomial:
    """The polynomial ``p(x)`` for real ``x`` (``conj z = z``)."""
    acc: dict = {}
    zero = _zero_of(p.regime)
    for (u, v), c in p.terms.items():
        e = tuple(a + b for a, b in zip(u, v))
        acc[e] = acc.get(e, zero) + c
    out = {}
    for e, c in acc.items():
        if p.regime == "exact":
            if c.im:
                raise ValueError("real restriction has a complex coefficient")
            if c.re:
                out[e] = c.re
        else:
            if abs(c.imag) > 1e-10 * max(1.0, abs(c)):
                raise ValueError("real restriction has a complex coefficient")
            if c.real:
                out[e] = c.real
    return RealPolynomial(p.nvars, out, p.regime, p.names)


def dehomogenize(p: Poly, assignments: Mapping) -> Poly:
    """Substitute constants for some variables (conjugates for ``conj z``).

    ``assignments`` maps variable indices or names to constants.  The
    remaining variables keep their names and block membership.
    """
    idx = {}
    for k, val in assignments.items():
        i = p.var_index(k)
        idx[i] = _coerce(val, p.regime)
    keep = [i for i in range(p.nvars) if i not in idx]
    newpos = {old: new for new, old in enumerate(keep)}
    zero = _zero_of(p.regime)
    acc: dict = {}
    for (u, v), c in p.terms.items():
        t = c
        for i, val in idx.items():
            if u[i]:
                t = t * val ** u[i]
            if v[i]:
                t = t * val.conjugate() ** v[i]
        key = (tuple(u[i] for i in keep), tuple(v[i] for i in keep))
        acc[key] = acc.get(key, zero) + t
    blocks = [(name, tuple(newpos[i] for i in b if i in newpos)) for name, b in p.blocks]
    names = [p.names[i] for i in keep]
    cls = type(p)
    return cls(len(keep), acc, p.regime, names, blocks)


def homogenize(p: Poly, degrees: Mapping, homogenizers: Mapping) -> Poly:
    """Insert one homogenizing variable per block and pad every term.

    ``degrees`` maps a block name to a target ``(holomorphic, antiholomorphic)``
    degree (an int ``d`` means ``(d, d)``).  ``homogenizers`` maps the same
    block name to ``(position_within_block, new_variable_name)``.  Blocks
    must be contiguous and listed in variable order.
    """
    starts = {}
    pos = 0
    for name, idx in p.blocks:
        if tuple(idx) != tuple(range(pos, pos + len(idx))):
            raise ValueError("homogenize needs contiguous blocks listed in order")
        starts[name] = pos
        pos += len(idx)
    if pos != p.nvars:
        raise ValueError("blocks must cover every variable")
    block_idx = {name: idx for name, idx in p.blocks}
    inserts = []  # (global insertion index, block name, new name)
    for name, (where, new_name) in homogenizers.items():
        if name not in block_idx:
            raise KeyError(f"unknown block {name!r}")
        if not 0 <= where <= len(block_idx[name]):
            raise ValueError("homogenizer position outside the block")
        inserts.append((starts[name] + where, name, new_name))
    inserts.sort(key=lambda t: t[0])
    # map old index -> new index
    new_n = p.nvars + len(inserts)
    old_to_new = {}
    new_names: list = []
    shift = 0
    ins_pos = {}
    k = 0
    for old in range(p.nvars + 1):
        while k < len(inserts) and inserts[k][0] == old:
            ins_pos[inserts[k][1]] = old + shift
            new_names.append(inserts[k][2])
            shift += 1
            k += 1
        if old < p.nvars:
            old_to_new[old] = old + shift
            new_names.append(p.names[old])
    targets = {}
    for name, d in degrees.items():
        targets[name] = (d, d) if isinstance(d, int) else tuple(d)
    new_blocks = []
    for name, idx in p.blocks:
        members = [old_to_new[i] for i in idx]
        if name in ins_pos:
            members.append(ins_pos[name])
        new_blocks.append((name, tuple(sorted(members))))
    zero = _zero_of(p.regime)
    acc: dict = {}
    for (u, v), c in p.terms.items():
        nu = [0] * new_n
        nv = [0] * new_n
        for i in range(p.nvars):
            nu[old_to_new[i]] = u[i]
            nv[old_to_new[i]] = v[i]
        for name, hpos in ins_pos.items():
            du, dv = targets[name]
            bu = sum(u[i] for i in block_idx[name])
            bv = sum(v[i] for i in block_idx[name])
            if bu > du or bv > dv:
                raise ValueError(f"target degree too small for block {name!r}")
            nu[hpos] = du - bu
            nv[hpos] = dv - bv
        key = (tuple(nu), tuple(nv))
        acc[key] = acc.get(key, zero) + c
    return type(p)(new_n, acc, p.regime, new_names, new_blocks)


class SupportSet:
    """A finite set of exponent pairs closed under ``(u, v) -> (v, u)``."""

    __slots__ = ("nvars", "pairs")

    def __init__(self, nvars: int, pairs: Iterable):
        self.nvars = int(nvars)
        ps = set()
        for u, v in pairs:
            u, v = tuple(u), tuple(v)
            if len(u) != self.nvars or len(v) != self.nvars:
                raise ValueError("exponent length does not match nvars")
            ps.add((u, v))
        for u, v in ps:
            if (v, u) not in ps:
                raise ValueError("support set is not closed under the swap (u,v) -> (v,u)")
        self.pairs = frozenset(ps)

    def ordered(self) -> list:
        return sorted(self.pairs, key=term_key)

    def __len__(self):
        return len(self.pairs)

    def __contains__(self, item):
        return (tuple(item[0]), tuple(item[1])) in self.pairs

    def __iter__(self):
        return iter(self.ordered())

    def __eq__(self, other):
        return isinstance(other, SupportSet) and self.nvars == other.nvars and self.pairs == other.pairs

    def __hash__(self):
        return hash((self.nvars, self.pairs))

    def __repr__(self):
        return f"SupportSet(nvars={self.nvars}, size={len(self.pairs)})"


def support(p: Poly) -> SupportSet:
    return SupportSet(p.nvars, p.terms.keys())


def _dominated(m: Monomial):
    u, v = m
    ranges = [range(x + 1) for x in u + v]
    n = len(u)
    for e in itertools.product(*ranges):
        yield (tuple(e[:n]), tuple(e[n:]))


def is_downward_closed(a: SupportSet) -> bool:
    """Every componentwise-dominated pair of a member is a member."""
    for m in a.pairs:
        u, v = m
        # checking immediate predecessors suffices
        for i in range(a.nvars):
            if u[i]:
                if (u[:i] + (u[i] - 1,) + u[i + 1:], v) not in a.pairs:
                    return False
            if v[i]:
                if (u, v[:i] + (v[i] - 1,) + v[i + 1:]) not in a.pairs:
                    return False
    return True


def downward_closure(a: SupportSet) -> SupportSet:
    out = set()
    for m in a.pairs:
        out.update(_dominated(m))
    return SupportSet(a.nvars, out)


def monomial_map(a, z, order: Sequence | None = None) -> np.ndarray:
    """Evaluate ``[z^u conj(z)^v]`` over ``a`` in canonical order (or ``order``)."""
    pairs = list(order) if order is not None else a.ordered()
    z = np.asarray(z, dtype=complex)
    n = a.nvars if isinstance(a, SupportSet) else len(z)
    if z.shape != (n,):
        raise ValueError("point dimension does not match nvars")
    zc = z.conj()
    out = np.empty(len(pairs), dtype=complex)
    for k, (u, v) in enumerate(pairs):
        t = 1.0 + 0j
        for i in range(n):
            if u[i]:
                t *= z[i] ** u[i]
            if v[i]:
                t *= zc[i] ** v[i]
        out[k] = t
    return out


def block_support(block_sizes: Sequence[int], degree: int = 1, mode: str = "le") -> SupportSet:
    """Pairs ``(u, v)`` whose restriction to every block has total degree ``<= degree``
    (``mode="le"``) or ``== degree`` (``mode="eq"``), separately for ``u`` and ``v``."""
    n = sum(block_sizes)
    per_block = []
    for size in block_sizes:
        opts = []
        for e in itertools.product(range(degree + 1), repeat=size):
            s = sum(e)
            if (mode == "le" and s <= degree) or (mode == "eq" and s == degree):
                opts.append(e)
        per_block.append(opts)
    halves = [sum(parts, ()) for parts in itertools.product(*per_block)]
    pairs = [(u, v) for u in halves for v in halves]
    return SupportSet(n, pairs)


def homogenize_pair(m: Monomial, block_sizes: Sequence[int], degree: int = 1) -> Monomial:
    """Append one homogenizing coordinate to each block (at its end) so every
    block has degree exactly ``degree`` in ``u`` and in ``v``."""
    u, v = m
    nu, nv = [], []
    pos = 0
    for size in block_sizes:
        bu = u[pos:pos + size]
        bv = v[pos:pos + size]
        if sum(bu) > degree or sum(bv) > degree:
            raise ValueError("block degree exceeds the homogenization degree")
        nu.extend(bu)
        nu.append(degree - sum(bu))
        nv.extend(bv)
        nv.append(degree - sum(bv))
        pos += size
    return (tuple(nu), tuple(nv))
