"""Okounkov bodies, volume estimators and the volume identities they satisfy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geometry import LatticeSummary, Polytope, hull
from .series import (
    IDENTITY_FLAG,
    Flag,
    GradedSeries,
    NoSections,
    SeriesError,
    _affine_flag_map,
    exponent,
    gf_report,
    nonempty_degrees,
    restrict,
    semigroup_lattice,
    sum_series,
    veronese,
)
from .tables import ConvergenceTable

# Degrees scanned when building the group generated by the semigroup.
LATTICE_DEGREES = 24


class UndefinedInvariant(SeriesError):
    """A precondition of an asymptotic invariant fails (e.g. the series is not (GF))."""


@dataclass(frozen=True)
class OkounkovBody:
    body: Polytope
    exact: bool
    m_used: int
    lattice: LatticeSummary
    lattice_index: int | None

    @property
    def volume(self) -> Fraction:
        return self.body.volume()


@dataclass(frozen=True)
class VolumeReport:
    count_estimates: ConvergenceTable
    hull_estimates: ConvergenceTable
    normalized_target: Fraction | None
    lattice_index: int | None
    exponent: int


def sample_degrees(e: int, m_max: int) -> list[int]:
    """Multiples of e: all up to 12e, then every 10e, then the largest one <= m_max."""
    if m_max < e:
        return []
    out = set(range(e, min(12 * e, m_max) + 1, e))
    out.update(range(10 * e, m_max + 1, 10 * e))
    out.add(m_max - m_max % e)
    return sorted(out)


def _flag_image(series: GradedSeries, flag: Flag, points, m: int):
    matrix, offset = _affine_flag_map(flag, series.dim, series.bound)
    return [tuple(sum(r * x for r, x in zip(row, p)) + o * m for row, o in zip(matrix, offset)) for p in points]


def okounkov_body(series: GradedSeries, flag: Flag = IDENTITY_FLAG, m_max: int = 20) -> OkounkovBody:
    """conv of the union of Gamma_m / m over m <= m_max (exact when a closed form is known)."""
    degs = nonempty_degrees(series, m_max)
    if not degs:
        raise NoSections(f"no sections in degrees 1..{m_max}")
    lattice, index = semigroup_lattice(series, flag, min(m_max, LATTICE_DEGREES))
    exact = series.exact_body()
    if exact is not None:
        matrix, offset = _affine_flag_map(flag, series.dim, series.bound)
        return OkounkovBody(exact.map_affine(matrix, offset), True, m_max, lattice, index)
    pts = set()
    for m in degs:
        for v in _flag_image(series, flag, series.hull_vertices(m), m):
            pts.add(tuple(Fraction(x, m) for x in v))
    return OkounkovBody(hull(pts), False, m_max, lattice, index)


def _count_estimate(series, m):
    d = series.dim
    return Fraction(math.factorial(d) * series.count(m), m ** d)


def _hull_estimate(series, m):
    d = series.dim
    verts = series.hull_vertices(m)
    if not verts:
        return Fraction(0)
    return math.factorial(d) * hull(verts).volume() / m ** d


def volume_report(series: GradedSeries, flag: Flag = IDENTITY_FLAG, m_max: int = 100,
                  degrees: Sequence[int] | None = None) -> VolumeReport:
    """Count and hull estimators along multiples of the exponent.

    The normalized target for the count table is d! vol(body) / index of the
    degree-zero slice of the group generated by the semigroup.
    """
    e = exponent(series, m_max)
    degs = list(degrees) if degrees is not None else sample_degrees(e, m_max)
    degs = [m for m in degs if series.is_nonempty(m)]
    _, index = semigroup_lattice(series, flag, min(m_max, LATTICE_DEGREES))
    body = series.limit_body()
    d = series.dim
    target = None
    ain_target = None
    if body is not None:
        ain_target = math.factorial(d) * body.volume()
        if index is not None:
            target = ain_target / index
        elif ain_target == 0:
            target = Fraction(0)
    counts = ConvergenceTable("count", tuple((m, _count_estimate(series, m)) for m in degs), target)
    hulls = ConvergenceTable("hull", tuple((m, _hull_estimate(series, m)) for m in degs), ain_target)
    return VolumeReport(counts, hulls, target, index, e)


def restricted_volume(ambient: GradedSeries, vanishing: Sequence[int], flag: Flag = IDENTITY_FLAG,
                      m_max: int = 100) -> VolumeReport:
    restricted = restrict(ambient, vanishing)
    if restricted.dim == 0:
        raise SeriesError("dimension-zero subvariety unsupported")
    return volume_report(restricted, flag, m_max)


def asymptotic_intersection(series: GradedSeries, flag: Flag = IDENTITY_FLAG, m_max: int = 100,
                            degrees: Sequence[int] | None = None) -> ConvergenceTable:
    """Rows (m, d! vol(conv S_m) / m^d); needs the series to be generically finite."""
    rep = gf_report(series, min(m_max, LATTICE_DEGREES))
    if not rep.is_gf:
        raise UndefinedInvariant("series is not generically finite; asymptotic intersection undefined")
    e = exponent(series, m_max)
    degs = list(degrees) if degrees is not None else sample_degrees(e, m_max)
    degs = [m for m in degs if series.is_nonempty(m)]
    body = series.limit_body()
    target = math.factorial(series.dim) * body.volume() if body is not None else None
    return ConvergenceTable("ain", tuple((m, _hull_estimate(series, m)) for m in degs), target)


def difference_step(series: GradedSeries, m_max: int) -> int:
    e = exponent(series, m_max)
    return math.lcm(e, series.period_hint())


def finite_difference_volume(series: GradedSeries, m: int, step: int) -> Fraction:
    """Delta_step^d of the section count at m, divided by step^d.

    Exact for counts that are quasi-polynomials of period dividing ``step``
    on the residue class of m.
    """
    d = series.dim
    total = 0
    for j in range(d + 1):
        total += (-1) ** j * math.comb(d, j) * series.count(m - j * step)
    return Fraction(total, step ** d)


def volume_table(series: GradedSeries, m_max: int, degrees: Sequence[int] | None = None) -> ConvergenceTable:
    """Finite-difference volume estimates along multiples of the difference step."""
    s = difference_step(series, m_max)
    d = series.dim
    degs = list(degrees) if degrees is not None else sample_degrees(s, m_max)
    degs = [m for m in degs if m - d * s >= 0 and m % s == 0]
    body = series.limit_body()
    target = None
    if body is not None:
        index = semigroup_lattice(series, IDENTITY_FLAG, min(m_max, LATTICE_DEGREES))[1]
        if index is not None:
            target = math.factorial(d) * body.volume() / index
    return ConvergenceTable("vol", tuple((m, finite_difference_volume(series, m, s)) for m in degs), target)


@dataclass(frozen=True)
class FujitaIdentity:
    delta: int
    delta_lat: int | None
    delta_mismatch: bool
    vol: ConvergenceTable
    ain: ConvergenceTable
    residuals: tuple[tuple[int, Fraction], ...]
    residual: Fraction


def check_fujita_identity(series: GradedSeries, flag: Flag = IDENTITY_FLAG, m_max: int = 100) -> FujitaIdentity:
    """Compare delta * vol with the asymptotic intersection at matched degrees."""
    rep = gf_report(series, min(m_max, LATTICE_DEGREES))
    if not rep.is_gf:
        raise UndefinedInvariant("series is not generically finite")
    _, delta_lat = semigroup_lattice(series, flag, min(m_max, LATTICE_DEGREES))
    vol = volume_table(series, m_max)
    ain = asymptotic_intersection(series, flag, m_max, degrees=vol.indices)
    residuals = tuple((m, abs(rep.degree * v - a)) for (m, v), (_, a) in zip(vol.rows, ain.rows))
    if not residuals:
        raise SeriesError(f"m_max={m_max} too small for a finite-difference estimate")
    return FujitaIdentity(rep.degree, delta_lat, delta_lat != rep.degree, vol, ain, residuals, residuals[-1][1])


def homogeneity_check(series: GradedSeries, flag: Flag = IDENTITY_FLAG, h: int = 2, m_max: int = 12) -> bool:
    """Body of the h-th Veronese equals h times the body.

    Exact bodies are compared vertex by vertex; inner approximations by the
    sandwich h*B(m_max) inside B_h(m_max) inside h*B(h*m_max).
    """
    if h < 1:
        raise SeriesError("h must be >= 1")
    ver = veronese(series, h)
    bv = okounkov_body(ver, flag, m_max)
    bs = okounkov_body(series, flag, m_max)
    if bv.exact and bs.exact:
        return bv.body == bs.body.scale(h)
    outer = okounkov_body(series, flag, h * m_max).body.scale(h)
    return bv.body.contains_polytope(bs.body.scale(h)) and outer.contains_polytope(bv.body)


# ---------------------------------------------------------------------------
# certified comparison of sums of d-th roots


def _iroot(n: int, d: int) -> int:
    """floor(n ** (1/d)) for n >= 0."""
    if n < 2:
        return n
    if d == 1:
        return n
    if d == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + d - 1) // d)
    while True:
        y = ((d - 1) * x + n // x ** (d - 1)) // d
        if y >= x:
            break
        x = y
    while x ** d > n:
        x -= 1
    while (x + 1) ** d <= n:
        x += 1
    return x


def root_interval(v: Fraction, d: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure [lo, hi] of v^(1/d); lo == hi exactly when v is a d-th power."""
    v = Fraction(v)
    if v < 0:
        raise ValueError("negative radicand")
    rn, rd = _iroot(v.numerator, d), _iroot(v.denominator, d)
    if rn ** d == v.numerator and rd ** d == v.denominator:
        r = Fraction(rn, rd)
        return r, r
    scale = 1 << bits
    # v^(1/d) = (num * den^(d-1))^(1/d) / den
    n = v.numerator * v.denominator ** (d - 1) * scale ** d
    lo = _iroot(n, d)
    return Fraction(lo, scale * v.denominator), Fraction(lo + 1, scale * v.denominator)


def _float_bounds(terms, d):
    lo = hi = 0.0
    for c, v in terms:
        r = float(v) ** (1.0 / d)
        lo += float(c) * math.nextafter(math.nextafter(r, 0.0), 0.0)
        hi += float(c) * math.nextafter(math.nextafter(r, math.inf), math.inf)
    return math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf)


def certified_root_inequality(lhs: Sequence[tuple[Fraction, Fraction]], rhs: Sequence[tuple[Fraction, Fraction]],
                              d: int, max_bits: int = 1024) -> tuple[bool | None, str]:
    """Decide sum c_i v_i^(1/d) >= sum c'_j w_j^(1/d) for nonnegative c, v.

    A float pass with widened rounding certifies ``True``; otherwise the
    comparison is refined with exact rational enclosures.  Returns
    (verdict, method); verdict None means undecided at ``max_bits``.
    """
    lo_l, _ = _float_bounds(lhs, d)
    _, hi_r = _float_bounds(rhs, d)
    if lo_l >= hi_r:
        return True, "float"
    bits = 64
    while bits <= max_bits:
        l_lo = sum(Fraction(c) * root_interval(v, d, bits)[0] for c, v in lhs)
        l_hi = sum(Fraction(c) * root_interval(v, d, bits)[1] for c, v in lhs)
        r_lo = sum(Fraction(c) * root_interval(v, d, bits)[0] for c, v in rhs)
        r_hi = sum(Fraction(c) * root_interval(v, d, bits)[1] for c, v in rhs)
        if l_lo >= r_hi:
            return True, "exact"
        if l_hi < r_lo:
            return False, "exact"
        bits *= 2
    return None, "undecided"


@dataclass(frozen=True)
class LogConcavity:
    vol_sum: Fraction
    vol_first: Fraction
    vol_second: Fraction
    lhs: float
    rhs: float
    holds: bool | None
    method: str


def log_concavity_check(s1: GradedSeries, s2: GradedSeries, flag: Flag = IDENTITY_FLAG,
                        m_max: int = 42) -> LogConcavity:
    """vol(s1 + s2)^(1/d) >= vol(s1)^(1/d) + vol(s2)^(1/d) on the final estimates."""
    if s1.dim != s2.dim:
        raise SeriesError("log_concavity_check: dimension mismatch")
    d = s1.dim
    total = sum_series(s1, s2)
    v12 = volume_table(total, m_max).last
    v1 = volume_table(s1, m_max).last
    v2 = volume_table(s2, m_max).last
    holds, method = certified_root_inequality([(1, v12)], [(1, v1), (1, v2)], d)
    lhs = float(v12) ** (1 / d)
    rhs = float(v1) ** (1 / d) + float(v2) ** (1 / d)
    return LogConcavity(v12, v1, v2, lhs, rhs, holds, method)
