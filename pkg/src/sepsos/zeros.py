"""Non-SOS proofs from a parametrized curve of zeros.

If ``p = sum_i g_i^2`` and ``p`` vanishes along a curve, every ``g_i``
vanishes along it too.  Substituting the curve into a generic Hermitian
``g = sum_mu c_mu mu`` over a candidate basis and clearing denominators
gives exact linear conditions on the coefficients ``c``.  Coordinates that
are zero on the whole solution space are forced to vanish in every square;
if such a monomial ``nu`` has ``|nu|^2`` in ``p`` with a nonzero coefficient
that no other Gram entry can produce, ``p`` is not a sum of squares.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import rational_psd_check, solve_linear_exact
from .poly import Poly, conj_monomial, monomial_product, monomial_str, term_key
from .scalars import GaussQ, ONE, ZERO, as_gauss, format_fraction, parse_scalar
from .sos import GramBasis, MomentCertificate

__all__ = [
    "ZeroCurve",
    "VanishingSystem",
    "NotSOSProof",
    "NoContradiction",
    "cleared_substitution",
    "curve_vanishing_check",
    "build_vanishing_system",
    "forced_zero_coordinates",
    "contradiction_check",
    "moment_certificate_from_zeros",
    "prove_not_sos",
]


@dataclass(frozen=True)
class ZeroCurve:
    """A curve ``alpha -> (c_0(alpha), ..., c_k(alpha))`` with polynomial components.

    Components are exact :class:`Poly` objects in one complex parameter.
    ``blocks`` groups component indices into homogeneity blocks; components
    in the block of ``denominator_index`` are divided by that component when
    the curve is read in a dehomogenized chart.  ``chart`` lists, for each
    variable of a dehomogenized polynomial, the component it takes (``None``
    means the variables match the components one to one).
    """

    components: tuple
    denominator_index: int = 0
    excluded: tuple = ()
    blocks: tuple | None = None
    chart: tuple | None = None

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if comps:
            n = comps[0].nvars
            if any(c.nvars != n for c in comps):
                raise ValueError("curve components must share one parameter space")
            if any(c.regime != "exact" for c in comps):
                raise ValueError("curve components must be exact")
        if self.blocks is None:
            object.__setattr__(self, "blocks", (tuple(range(len(comps))),))
        if not 0 <= self.denominator_index < max(len(comps), 1):
            raise ValueError("denominator_index out of range")

    @property
    def param_nvars(self) -> int:
        return self.components[0].nvars if self.components else 1

    def denominator_block(self) -> tuple:
        for b in self.blocks:
            if self.denominator_index in b:
                return tuple(b)
        return ()

    def with_chart(self, chart) -> "ZeroCurve":
        return ZeroCurve(self.components, self.denominator_index, self.excluded, self.blocks, tuple(chart))

    def point(self, alpha):
        """Exact chart point at a Gaussian rational parameter (``alpha`` outside ``excluded``)."""
        a = as_gauss(alpha)
        if a in [as_gauss(e) for e in self.excluded]:
            raise ValueError("parameter value is excluded")
        vals = [c.evaluate_exact([a]) for c in self.components]
        if self.chart is None:
            return vals
        den = vals[self.denominator_index]
        if not den:
            raise ZeroDivisionError("curve denominator vanishes at this parameter")
        dblock = set(self.denominator_block())
        return [vals[j] / den if j in dblock else vals[j] for j in self.chart]

    def to_json(self) -> dict:
        return {
            "components": [c.to_json() for c in self.components],
            "denominator_index": self.denominator_index,
            "excluded": [{"re": format_fraction(as_gauss(e).re), "im": format_fraction(as_gauss(e).im)}
                         for e in self.excluded],
            "blocks": [list(b) for b in self.blocks],
            "chart": None if self.chart is None else list(self.chart),
        }

    @classmethod
    def from_json(cls, data) -> "ZeroCurve":
        comps = tuple(Poly.from_json(c) for c in data["components"])
        excluded = tuple(parse_scalar(e.get("re"), e.get("im"), "exact") if isinstance(e, dict)
                         else as_gauss(Fraction(str(e))) for e in data.get("excluded", []))
        blocks = data.get("blocks")
        chart = data.get("chart")
        return cls(comps, int(data.get("denominator_index", 0)), excluded,
                   None if blocks is None else tuple(tuple(b) for b in blocks),
                   None if chart is None else tuple(chart))


def _images(curve: ZeroCurve, nvars: int):
    if curve.chart is None:
        if nvars != len(curve.components):
            raise ValueError("polynomial variables do not match the curve components")
        return list(curve.components), [False] * nvars
    if nvars != len(curve.chart):
        raise ValueError("polynomial variables do not match the curve chart")
    dblock = set(curve.denominator_block())
    return [curve.components[j] for j in curve.chart], [j in dblock for j in curve.chart]


def _block_degrees(m, divided):
    u, v = m
    return sum(u[i] for i in range(len(u)) if divided[i]), sum(v[i] for i in range(len(v)) if divided[i])


def cleared_substitution(poly: Poly, curve: ZeroCurve, power: int | None = None) -> Poly:
    """``|den|^(2D) * poly(curve point)`` as an exact polynomial in the parameter.

    ``D`` defaults to the largest chart-block degree among the terms.
    """
    if poly.regime != "exact":
        raise TypeError("curve substitution is exact only")
    imgs, divided = _images(curve, poly.nvars)
    if power is None:
        power = max([max(_block_degrees(m, divided)) for m in poly.terms] + [0])
    den = curve.components[curve.denominator_index] if curve.components else None
    pn = curve.param_nvars
    out = Poly(pn, {}, "exact", curve.components[0].names if curve.components else None)
    for m, c in poly.terms.items():
        a, b = _block_degrees(m, divided)
        if a > power or b > power:
            raise ValueError("clearing power is too small for this polynomial")
        single = Poly(poly.nvars, {m: c}, "exact")
        t = single.substitute([Poly(q.nvars, q.terms, "exact", q.names) for q in imgs])
        if den is not None and (power - a or power - b):
            t = t * (den ** (power - a)) * (den.conj() ** (power - b))
        out = out + t
    return out


def curve_vanishing_check(p: Poly, curve: ZeroCurve) -> bool:
    """True iff ``p`` vanishes identically along the curve (exact coefficients)."""
    if p.regime != "exact":
        raise TypeError("curve_vanishing_check needs an exact polynomial")
    if p.is_zero():
        return True
    return cleared_substitution(p, curve).is_zero()


@dataclass
class VanishingSystem:
    """Rows: parameter monomials; columns: basis monomials; kernel of the matrix."""

    basis: tuple
    names: tuple
    row_monomials: tuple
    matrix: list
    kernel: tuple
    power: int

    def row(self, monomial) -> dict:
        """Nonzero entries of the row for a parameter monomial ``(u, v)``."""
        i = self.row_monomials.index((tuple(monomial[0]), tuple(monomial[1])))
        return {self.basis[j]: c for j, c in enumerate(self.matrix[i]) if c}

    def describe_row(self, monomial, param_names=("alpha",)) -> str:
        entries = self.row(monomial)
        parts = [f"{c}*c[{monomial_str(m, self.names)}]" for m, c in entries.items()]
        return f"{monomial_str(monomial, param_names)}: " + " + ".join(parts) + " = 0"

    def to_json(self) -> dict:
        def g(x):
            return {"re": format_fraction(x.re), "im": format_fraction(x.im)}

        return {
            "basis": [{"u": list(u), "v": list(v)} for u, v in self.basis],
            "names": list(self.names),
            "power": self.power,
            "rows": [
                {"monomial": {"u": list(r[0]), "v": list(r[1])},
                 "entries": [{"column": j, "value": g(c)} for j, c in enumerate(row) if c]}
                for r, row in zip(self.row_monomials, self.matrix)
            ],
            "kernel": [[g(x) for x in vec] for vec in self.kernel],
        }


def build_vanishing_system(basis, curve: ZeroCurve, nvars: int | None = None,
                           names=None, power: int | None = None) -> VanishingSystem:
    """Linear conditions on ``g = sum_mu c_mu mu`` from ``g = 0`` along the curve.

    The coefficients ``c_mu`` are treated as independent complex unknowns
    (Hermitian symmetry is not imposed), which only enlarges the kernel and
    keeps every derived zero sound.
    """
    if isinstance(basis, GramBasis):
        monos = basis.monomials
        nvars = basis.nvars
    else:
        monos = tuple(sorted({(tuple(u), tuple(v)) for u, v in basis}, key=term_key))
        if nvars is None:
            nvars = len(monos[0][0]) if monos else (len(curve.chart) if curve.chart else len(curve.components))
    imgs, divided = _images(curve, nvars)
    if power is None:
        power = max([max(_block_degrees(m, divided)) for m in monos] + [0])
    cols = []
    for m in monos:
        cols.append(cleared_substitution(Poly(nvars, {m: ONE}, "exact"), curve, power))
    row_keys = sorted({k for c in cols for k in c.terms}, key=term_key)
    matrix = [[c.terms.get(k, ZERO) for c in cols] for k in row_keys]
    if matrix:
        kernel = solve_linear_exact(matrix).kernel
    else:
        kernel = tuple(tuple(ONE if i == j else ZERO for i in range(len(monos))) for j in range(len(monos)))
    if names is None:
        names = tuple(f"z{i + 1}" for i in range(nvars))
    return VanishingSystem(tuple(monos), tuple(names), tuple(row_keys), matrix, tuple(kernel), power)


def forced_zero_coordinates(system: VanishingSystem) -> frozenset:
    """Basis monomials whose coefficient is zero in every solution.

    A Hermitian ``g`` has ``c_conj(mu) = conj(c_mu)``, so the set is closed
    under conjugation before it is returned.
    """
    forced = set()
    for j, m in enumerate(system.basis):
        if all(not vec[j] for vec in system.kernel):
            forced.add(m)
    closed = set(forced)
    basis = set(system.basis)
    for m in forced:
        cm = conj_monomial(m)
        if cm in basis:
            closed.add(cm)
    return frozenset(closed)


@dataclass
class NotSOSProof:
    monomial: tuple  # nu with |nu|^2 contradicted
    square: tuple  # the monomial conj(nu) * nu
    coefficient: object
    entries: tuple  # Gram entries that could produce |nu|^2
    forced: frozenset
    system: VanishingSystem | None = None
    curve_check: bool | None = None

    verdict = "not_sos"

    def report(self, names) -> dict:
        return {
            "verdict": "not_sos",
            "contradicted_monomial": monomial_str(self.square, names),
            "coefficient": str(self.coefficient),
            "forced_zero": sorted(monomial_str(m, names) for m in self.forced),
            "gram_entries": [[monomial_str(a, names), monomial_str(b, names)] for a, b in self.entries],
            "curve_vanishes": self.curve_check,
        }


@dataclass
class NoContradiction:
    reason: str
    checked: tuple = ()

    verdict = "no_contradiction"


def contradiction_check(p: Poly, basis, forced) -> NotSOSProof | NoContradiction:
    """Find ``nu`` forced to zero whose square has a nonzero coefficient in ``p``
    that only forced Gram entries can produce."""
    monos = basis.monomials if isinstance(basis, GramBasis) else tuple((tuple(u), tuple(v)) for u, v in basis)
    forced = frozenset(forced)
    if not forced <= set(monos):
        raise ValueError("forced set is not contained in the basis")
    zero_side = set(forced) | {conj_monomial(m) for m in forced}
    checked = []
    for nu in sorted(forced, key=term_key):
        sq = monomial_product(conj_monomial(nu), nu)
        coeff = p.terms.get(sq)
        if not coeff:
            checked.append((nu, "zero coefficient"))
            continue
        entries = [(a, b) for a in monos for b in monos if monomial_product(conj_monomial(a), b) == sq]
        if all(a in zero_side and b in zero_side for a, b in entries):
            return NotSOSProof(nu, sq, coeff, tuple(entries), forced)
        checked.append((nu, "reachable through a free entry"))
    if not forced:
        return NoContradiction("no forced coordinates")
    return NoContradiction("every forced monomial has a zero or reachable square coefficient", tuple(checked))


def prove_not_sos(p: Poly, curve: ZeroCurve, basis=None, whole_curve: ZeroCurve | None = None,
                  homogeneous=None, names=None):
    """Run the pipeline: curve check, vanishing system, forced zeros, contradiction.

    ``homogeneous`` optionally gives a polynomial on the curve's full
    component space (``whole_curve``) for the identity check; otherwise the
    cleared substitution of ``p`` itself is checked.
    """
    from .sos import candidate_basis

    gb = basis if isinstance(basis, GramBasis) else (candidate_basis(p) if basis is None
                                                      else GramBasis.closure(p.nvars, basis))
    if homogeneous is not None:
        ok = curve_vanishing_check(homogeneous, whole_curve or ZeroCurve(curve.components,
                                                                          curve.denominator_index,
                                                                          curve.excluded, curve.blocks))
    else:
        ok = curve_vanishing_check(p, curve)
    system = build_vanishing_system(gb, curve, names=names or p.names)
    forced = forced_zero_coordinates(system)
    if not ok:
        return NoContradiction("polynomial does not vanish on the curve"), system, gb
    res = contradiction_check(p, gb, forced)
    if isinstance(res, NotSOSProof):
        res.system = system
        res.curve_check = ok
    return res, system, gb


def _mono_value(m, z):
    u, v = m
    t = ONE
    for i, (a, b) in enumerate(zip(u, v)):
        if a:
            t = t * z[i] ** a
        if b:
            t = t * z[i].conjugate() ** b
    return t


DEFAULT_SAMPLE_PARAMS = tuple(
    GaussQ(a, b) for a, b in [(2, 0), (-1, 0), (3, 0), (0, 1), (1, 1), (-2, 1), (1, -2), (2, 2),
                              (-1, -1), (3, -1), (Fraction(1, 2), 0), (0, -2), (-3, 2), (1, 3),
                              (Fraction(-1, 2), Fraction(3, 2)), (4, 1), (2, -3), (-2, -3), (5, 0),
                              (0, 3), (Fraction(1, 3), 1), (-4, 1), (3, 3), (1, -4)]
)


def moment_certificate_from_zeros(p: Poly, curve: ZeroCurve, proof: NotSOSProof, basis: GramBasis,
                                  params=DEFAULT_SAMPLE_PARAMS, max_doublings: int = 60):
    """Turn a zeros-based proof into an exact moment certificate.

    ``L = t * sum_j ev(z_j) + L1`` where ``z_j`` are curve points (so
    ``ev(z_j)(p) = 0``) and ``L1`` puts ``-1`` on the contradicted square.
    Forced monomials lie in the range of the evaluation moment matrix, so a
    large enough ``t`` makes the moment matrix PSD while ``L(p) = -coef``.
    """
    F = basis.monomials
    pts = []
    for a in params:
        try:
            pts.append(curve.point(a))
        except (ValueError, ZeroDivisionError):
            continue
    for z in pts:
        if p.evaluate_exact(z):
            raise ValueError("sample point is not a zero of p")
    classes = {}
    for x in F:
        for y in F:
            w = monomial_product(conj_monomial(x), y)
            classes.setdefault(w, None)
    for w in p.terms:
        classes.setdefault(w, None)
    ev = {w: sum((_mono_value(w, z) for z in pts), ZERO) for w in classes}
    sq = proof.square
    t = Fraction(1)
    for _ in range(max_doublings):
        vals = {w: ev[w] * t for w in classes}
        vals[sq] = vals[sq] - ONE
        M = [[vals[monomial_product(conj_monomial(x), y)] for y in F] for x in F]
        if rational_psd_check(M).is_psd:
            lp = ZERO
            for w, c in p.terms.items():
                lp = lp + c * vals[w]
            if lp.im or not lp.re < 0:
                return None
            return MomentCertificate(p.nvars, tuple(F), vals, lp.re, "exact", "hermitian")
        t *= 2
    return None
