"""Monomial ideals, Howald multiplier ideals and the asymptotic comparisons built on them.

Ideals live in the homogeneous coordinate ring k[x_0, ..., x_d]; exponent
vectors have length d + 1.  Statements about sheaves on P^d are checked
chart by chart: the chart x_i != 0 is obtained by setting the i-th exponent
of every generator to zero.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import hull, minkowski_sum
from .series import GradedSeries, SeriesError, exponent, homogenize, nonempty_degrees, restrict, sum_series
from .tables import ConvergenceTable


class IdealError(ValueError):
    pass


class Refused(Exception):
    """A check whose hypothesis is not met; the message gives the reason."""


def _minimal(gens: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    pts = sorted({tuple(int(x) for x in g) for g in gens}, key=lambda g: (sum(g), g))
    if len({sum(g) for g in pts}) <= 1:
        return tuple(sorted(pts))
    keep: list[tuple[int, ...]] = []
    for g in pts:
        if not any(all(x <= y for x, y in zip(h, g)) for h in keep if sum(h) < sum(g)):
            keep.append(g)
    return tuple(sorted(keep))


def newton_facets(points: Iterable[Sequence[int]]) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    """Facets a . x >= beta (a >= 0 primitive) of conv(points) + orthant."""
    pts = [tuple(p) for p in points]
    n = len(pts[0])
    verts = [tuple(int(x) for x in v) for v in hull(pts).vertices]
    far = [tuple(x + (1 if j == i else 0) for j, x in enumerate(v)) for v in verts for i in range(n)]
    q = hull(verts + far)
    out = set()
    for a, b in q.integer_facets():
        normal = tuple(-int(x) for x in a)
        if all(x >= 0 for x in normal) and any(normal):
            out.add((normal, -b))
    return tuple(sorted(out))


class MonomialIdeal:
    """Monomial ideal given by its minimal generators (exponent vectors)."""

    def __init__(self, generators: Iterable[Sequence[int]], nvars: int, newton_hint: Iterable | None = None):
        gens = [tuple(int(x) for x in g) for g in generators]
        for g in gens:
            if len(g) != nvars or any(x < 0 for x in g):
                raise IdealError(f"bad exponent {g} for {nvars} variables")
        self.nvars = nvars
        self.generators = _minimal(gens)
        self._hint = None if newton_hint is None else [tuple(int(x) for x in p) for p in newton_hint]
        self._facets = None

    @classmethod
    def unit(cls, nvars):
        return cls([(0,) * nvars], nvars)

    @classmethod
    def zero(cls, nvars):
        return cls([], nvars)

    def __eq__(self, other):
        return isinstance(other, MonomialIdeal) and self.nvars == other.nvars and self.generators == other.generators

    def __hash__(self):
        return hash((self.nvars, self.generators))

    def __repr__(self):
        return f"MonomialIdeal({list(self.generators)})"

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_unit(self) -> bool:
        return self.generators == ((0,) * self.nvars,)

    def contains(self, v: Sequence[int]) -> bool:
        return any(all(g_i <= v_i for g_i, v_i in zip(g, v)) for g in self.generators)

    def contains_ideal(self, other: "MonomialIdeal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal(self.generators + other.generators, self.nvars)

    def product(self, other: "MonomialIdeal") -> "MonomialIdeal":
        if self.is_zero or other.is_zero:
            return MonomialIdeal.zero(self.nvars)
        return MonomialIdeal(minkowski_sum(self.generators, other.generators), self.nvars)

    def power(self, k: int) -> "MonomialIdeal":
        if k < 0:
            raise IdealError("negative power")
        out = MonomialIdeal.unit(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out.product(base)
            k >>= 1
            if k:
                base = base.product(base)
        return out

    def intersection(self, other: "MonomialIdeal") -> "MonomialIdeal":
        return MonomialIdeal([tuple(max(x, y) for x, y in zip(g, h))
                              for g in self.generators for h in other.generators], self.nvars)

    def translate(self, n: Sequence[int]) -> "MonomialIdeal":
        """The twist by -N: multiply by x^n."""
        return MonomialIdeal([tuple(x + y for x, y in zip(g, n)) for g in self.generators], self.nvars)

    def chart(self, i: int) -> "MonomialIdeal":
        """Ideal of the affine chart x_i != 0, kept in the same variables (exponent i zeroed)."""
        return MonomialIdeal([g[:i] + (0,) + g[i + 1:] for g in self.generators], self.nvars)

    def saturate(self) -> "MonomialIdeal":
        """Saturation by the irrelevant ideal: the intersection of all charts."""
        if self.is_zero:
            return self
        out = self.chart(0)
        for i in range(1, self.nvars):
            out = out.intersection(self.chart(i))
        return out

    def sheaf_contains(self, other: "MonomialIdeal") -> bool:
        """Containment of the associated ideal sheaves on P^(nvars - 1)."""
        return all(self.chart(i).contains_ideal(other.chart(i)) for i in range(self.nvars))

    def sheaf_equal(self, other: "MonomialIdeal") -> bool:
        return self.sheaf_contains(other) and other.sheaf_contains(self)

    def restrict(self, vanishing: Sequence[int]) -> "MonomialIdeal":
        """Image in the coordinate ring of V = {x_j = 0 : j in vanishing} (homogeneous indices)."""
        drop = set(vanishing)
        keep = [i for i in range(self.nvars) if i not in drop]
        gens = [tuple(g[i] for i in keep) for g in self.generators if all(g[j] == 0 for j in drop)]
        return MonomialIdeal(gens, len(keep))

    def newton_facets(self):
        if self.is_zero:
            raise IdealError("zero ideal has no Newton polyhedron")
        if self._facets is None:
            self._facets = newton_facets(self._hint or self.generators)
        return self._facets

    def max_exponents(self) -> tuple[int, ...]:
        pts = self._hint or self.generators
        return tuple(max(p[i] for p in pts) for i in range(self.nvars))


# ---------------------------------------------------------------------------
# staircases cut out by a Newton polyhedron


def _staircase(facets, nvars: int, box: Sequence[int], member) -> list[tuple[int, ...]]:
    """Minimal elements of an up-closed set of exponents given by ``member``.

    For each prefix in the box the smallest admissible last coordinate is found
    by bisection; candidates whose predecessors are all outside are kept.
    """
    found = []
    hi_last = box[-1]
    for prefix in itertools.product(*[range(b + 1) for b in box[:-1]]):
        if not member(prefix + (hi_last,)):
            continue
        lo, hi = 0, hi_last
        while lo < hi:
            mid = (lo + hi) // 2
            if member(prefix + (mid,)):
                hi = mid
            else:
                lo = mid + 1
        found.append(prefix + (lo,))
    out = []
    for v in found:
        if all(v[i] == 0 or not member(v[:i] + (v[i] - 1,) + v[i + 1:]) for i in range(nvars)):
            out.append(v)
    return out


def integral_closure(ideal: MonomialIdeal) -> MonomialIdeal:
    """Lattice points of the Newton polyhedron."""
    if ideal.is_zero:
        raise IdealError("integral closure of the zero ideal")
    facets = ideal.newton_facets()

    def member(v):
        return all(sum(x * y for x, y in zip(a, v)) >= b for a, b in facets)

    box = ideal.max_exponents()
    return MonomialIdeal(_staircase(facets, ideal.nvars, box, member), ideal.nvars)


def multiplier_ideal(ideal: MonomialIdeal, c) -> MonomialIdeal:
    """Howald: x^v is in J(c * a) iff v + (1, ..., 1) lies in the interior of c * P(a)."""
    if ideal.is_zero:
        raise IdealError("multiplier ideal of the zero ideal")
    return _howald(ideal.newton_facets(), ideal.nvars, c, ideal.max_exponents())


def _howald(facets, nvars: int, c, max_exponents) -> MonomialIdeal:
    c = Fraction(c)
    if c <= 0:
        raise IdealError("coefficient must be positive")

    def member(v):
        return all(sum(x * (y + 1) for x, y in zip(a, v)) > c * b for a, b in facets)

    # a minimal generator never exceeds c * max_i in coordinate i
    box = [math.floor(c * m) for m in max_exponents]
    return MonomialIdeal(_staircase(facets, nvars, box, member), nvars)


def base_ideal(series: GradedSeries, p: int) -> MonomialIdeal:
    """Ideal generated by the degree-p sections in homogeneous coordinates (zero if S_p is empty)."""
    n = series.dim + 1
    secs = series.sections(p)
    if not secs:
        return MonomialIdeal.zero(n)
    gens = [homogenize(a, p, series.bound) for a in secs]
    hint = [homogenize(a, p, series.bound) for a in series.hull_vertices(p)] if p else None
    return MonomialIdeal(gens, n, newton_hint=hint)


def _homogeneous_vertices(series: GradedSeries, p: int):
    return [homogenize(a, p, series.bound) for a in series.hull_vertices(p)]


def base_newton(series: GradedSeries, p: int):
    """Newton facets of the degree-p base ideal, from hull vertices only (None if S_p is empty)."""
    verts = _homogeneous_vertices(series, p)
    return newton_facets(verts) if verts else None


@dataclass(frozen=True)
class AsymptoticIdeal:
    """Running sum of J(1/k * b_{pk}) for k <= k_cap.

    ``stabilized_at`` is the first k at which the final value was reached,
    provided the last two admissible terms agree; None otherwise.
    """

    ideal: MonomialIdeal
    stabilized_at: int | None
    chain: tuple[tuple[int, MonomialIdeal], ...]

    @property
    def stabilized(self) -> bool:
        return self.stabilized_at is not None


_ASYM_CACHE: dict = {}


def asymptotic_multiplier_ideal(series: GradedSeries, p: int, k_cap: int = 8) -> AsymptoticIdeal:
    key = (id(series), p, k_cap)
    hit = _ASYM_CACHE.get(key)
    if hit is not None and hit[0] is series:
        return hit[1]
    n = series.dim + 1
    total = None
    chain = []
    for k in range(1, k_cap + 1):
        verts = _homogeneous_vertices(series, p * k)
        if not verts:
            continue
        top = tuple(max(v[i] for v in verts) for i in range(n))
        j = _howald(newton_facets(verts), n, Fraction(1, k), top)
        total = j if total is None else total + j
        chain.append((k, total))
    if total is None:
        raise SeriesError(f"no sections in degrees {p}, ..., {p * k_cap}")
    stab = None
    if len(chain) >= 2 and chain[-1][1] == chain[-2][1]:
        stab = next(k for k, t in chain if t == total)
    out = AsymptoticIdeal(total, stab, tuple(chain))
    _ASYM_CACHE[key] = (series, out)
    return out


# ---------------------------------------------------------------------------
# property (*)


def _deficiency(j: Sequence[int], base: MonomialIdeal, chart: int) -> tuple[int, ...]:
    best = None
    for b in base.generators:
        need = tuple(0 if i == chart else max(x - y, 0) for i, (x, y) in enumerate(zip(b, j)))
        key = (sum(need), need)
        if best is None or key < best[0]:
            best = (key, need)
    return best[1]


def star_shift(jp: MonomialIdeal, bp: MonomialIdeal) -> tuple[int, ...] | None:
    """A small n with x^n * J_p inside b_p as sheaves (None if b_p is zero and J_p is not)."""
    if jp.is_zero:
        return (0,) * jp.nvars
    if bp.is_zero:
        return None
    n = [0] * jp.nvars
    for j in jp.generators:
        for i in range(jp.nvars):
            for t, x in enumerate(_deficiency(j, bp, i)):
                n[t] = max(n[t], x)
    return tuple(n)


@dataclass(frozen=True)
class StarWitnessReport:
    """Per-p shifts n_p with x^(n_p) J_p inside b_p, and their componentwise max.

    ``stabilized`` means the running max of n_p no longer grows over the second
    half of the tested range; ``obstructions`` lists p with b_p = 0 but J_p != 0.
    """

    per_p_shifts: dict
    stabilized: bool
    witness: tuple[int, ...] | None
    p_range: int
    verified: bool
    obstructions: tuple[int, ...] = ()
    asymptotic_ideals: dict | None = None


def check_star(series: GradedSeries, p_max: int = 10, k_cap: int = 8, include_empty: bool = False) -> StarWitnessReport:
    """Search for one twist N with J(||pD||)(-N) inside b(|pD|) for all tested p."""
    shifts = {}
    obstructions = []
    ideals = {}
    for p in range(1, p_max + 1):
        bp = base_ideal(series, p)
        if bp.is_zero and not include_empty:
            continue
        try:
            asym = asymptotic_multiplier_ideal(series, p, k_cap)
        except SeriesError:
            continue
        ideals[p] = asym
        n = star_shift(asym.ideal, bp)
        if n is None:
            obstructions.append(p)
            continue
        shifts[p] = n
    if not shifts and not obstructions:
        raise SeriesError(f"no sections in degrees 1..{p_max}")
    witness = None
    verified = False
    if shifts and not obstructions:
        witness = tuple(max(n[i] for n in shifts.values()) for i in range(series.dim + 1))
        verified = all(base_ideal(series, p).sheaf_contains(ideals[p].ideal.translate(witness)) for p in shifts)
        if not verified:
            witness = None
    # the running componentwise max of n_p must be constant on the second half
    running, acc = [], None
    for n in shifts.values():
        acc = n if acc is None else tuple(max(x, y) for x, y in zip(acc, n))
        running.append(acc)
    tail = running[len(running) // 2:]
    stabilized = len(tail) >= 2 and all(n == tail[0] for n in tail)
    return StarWitnessReport(shifts, stabilized, witness, p_max, verified, tuple(obstructions), ideals)


def is_finitely_generated(series: GradedSeries, p_max: int = 14, m_check: int = 8) -> int | None:
    """Smallest p0 with b_{m p0} = b_{p0}^m for m <= m_check (exact ideal equality)."""
    for p in range(1, p_max + 1):
        bp = base_ideal(series, p)
        if bp.is_zero:
            continue
        power = bp
        ok = True
        for m in range(2, m_check + 1):
            power = power.product(bp)
            if power != base_ideal(series, m * p):
                ok = False
                break
        if ok:
            return p
    return None


# ---------------------------------------------------------------------------
# reduced volume


def _homogeneous_monomials(nvars: int, degree: int):
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree + 1):
        for rest in _homogeneous_monomials(nvars - 1, degree - first):
            yield (first,) + rest


def _in_saturated_restriction(u_lift, charts, facet_sets) -> bool:
    # for every chart of V some k puts u in J_k : x_i^infinity
    for i in charts:
        if not any(all(a[i] > 0 or sum(x * (y + 1) for x, y in zip(a, u_lift)) > c * b for a, b in facets)
                   for c, facets in facet_sets):
            return False
    return True


def _mu_count(ambient: GradedSeries, vanishing: Sequence[int], m: int, k_cap: int) -> int:
    n = ambient.dim + 1
    keep = [i for i in range(n) if i not in set(vanishing)]
    facet_sets = []
    for k in range(1, k_cap + 1):
        f = base_newton(ambient, m * k)
        if f is not None:
            facet_sets.append((Fraction(1, k), f))
    if not facet_sets:
        return 0
    degree = m * ambient.bound
    # a chart needs no enumeration when, for some k, every facet is either
    # inactive on it or satisfied already at u = 0
    open_charts = [i for i in keep
                   if not any(all(a[i] > 0 or sum(a) > c * b for a, b in facets) for c, facets in facet_sets)]
    total = 0
    for u in _homogeneous_monomials(len(keep), degree):
        if not open_charts:
            total += 1
            continue
        lift = [0] * n
        for i, x in zip(keep, u):
            lift[i] = x
        if _in_saturated_restriction(lift, open_charts, facet_sets):
            total += 1
    return total


def reduced_volume(ambient: GradedSeries, vanishing: Sequence[int], m_max: int = 100, k_cap: int = 2,
                   degrees: Sequence[int] | None = None) -> ConvergenceTable:
    """Rows (m, d! #{degree-m monomials on V in J(||mL||) O_V, saturated} / m^d).

    ``vanishing`` uses 1-based dehomogenized coordinates, as :func:`restrict`.
    """
    from .okounkov import sample_degrees

    restricted = restrict(ambient, vanishing)
    d = restricted.dim
    hom = [j for j in vanishing]
    e = exponent(ambient, m_max)
    degs = list(degrees) if degrees is not None else sample_degrees(e, m_max)
    rows = []
    for m in degs:
        if not restricted.is_nonempty(m):
            rows.append((m, Fraction(0)))
            continue
        rows.append((m, Fraction(math.factorial(d) * _mu_count(ambient, hom, m, k_cap), m ** d)))
    return ConvergenceTable("mu", tuple(rows))


@dataclass(frozen=True)
class MuAinCheck:
    mu: ConvergenceTable
    ain: ConvergenceTable
    delta_vol: ConvergenceTable
    delta: int
    residuals: dict
    mu_dominates: bool


def mu_equals_ain_check(ambient: GradedSeries, vanishing: Sequence[int], m_max: int = 100,
                        p_max: int = 4, k_cap: int = 2) -> MuAinCheck:
    """Compare mu(V, L), the asymptotic intersection on V and delta * restricted volume."""
    from .okounkov import asymptotic_intersection, volume_table

    star = check_star(ambient, p_max)
    if star.witness is None:
        raise Refused("no (*) witness found for the ambient series in the tested range")
    restricted = restrict(ambient, vanishing)
    if restricted.dim == 0:
        raise SeriesError("dimension-zero subvariety unsupported")
    from .series import gf_report

    delta = gf_report(restricted, min(m_max, 24)).degree
    if delta is None:
        raise Refused("restricted series is not generically finite")
    vol = volume_table(restricted, m_max)
    degs = sorted(set(vol.indices) | {m_max})
    mu = reduced_volume(ambient, vanishing, m_max, k_cap, degrees=degs)
    ain = asymptotic_intersection(restricted, m_max=m_max, degrees=degs)
    dv = ConvergenceTable("delta*vol", tuple((m, delta * v) for m, v in vol.rows), vol.target and delta * vol.target)
    last_mu, last_ain = mu.value_at(m_max), ain.value_at(m_max)
    last_dv = dv.last

    def rel(x, y):
        return abs(x - y) / max(abs(y), Fraction(1, 10 ** 12))

    residuals = {
        "mu-ain": rel(last_mu, last_ain),
        "mu-delta_vol": rel(last_mu, last_dv),
        "ain-delta_vol": rel(last_ain, last_dv),
    }
    dominates = all(mu.value_at(m) >= a for m, a in ain.rows)
    return MuAinCheck(mu, ain, dv, delta, residuals, dominates)


# ---------------------------------------------------------------------------
# valuations


@dataclass(frozen=True)
class MonomialValuation:
    """Toric valuation x^a -> <w, a>.

    Only w up to adding multiples of (1, ..., 1) matters on projective space;
    :attr:`normalized` subtracts the minimum so that the center lies on P^d.
    """

    weights: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        if any(x < 0 for x in w) or not any(w):
            raise IdealError("weights must be nonnegative and not all zero")
        if math.gcd(*w) != 1:
            raise IdealError("weights must be primitive")
        object.__setattr__(self, "weights", w)

    @property
    def normalized(self) -> tuple[int, ...]:
        lo = min(self.weights)
        return tuple(x - lo for x in self.weights)

    def of_monomial(self, a: Sequence[int]) -> int:
        return sum(x * y for x, y in zip(self.normalized, a))

    def of_ideal(self, ideal: MonomialIdeal) -> int | None:
        if ideal.is_zero:
            return None
        return min(self.of_monomial(g) for g in ideal.generators)


@dataclass(frozen=True)
class OrderReport:
    per_p: ConvergenceTable
    infimum: Fraction


def base_order(series: GradedSeries, v: MonomialValuation, p: int) -> int:
    """v(b_p), read off the hull vertices of S_p (v is linear)."""
    return min(v.of_monomial(homogenize(a, p, series.bound)) for a in series.hull_vertices(p))


def asymptotic_order(series: GradedSeries, v: MonomialValuation, p_max: int = 20) -> OrderReport:
    degs = nonempty_degrees(series, p_max)
    if not degs:
        raise SeriesError(f"no sections in degrees 1..{p_max}")
    rows = tuple((p, Fraction(base_order(series, v, p), p)) for p in degs)
    return OrderReport(ConvergenceTable("v(b_p)/p", rows), min(r for _, r in rows))


@dataclass(frozen=True)
class ValuationChecks:
    v_bounded_ok: bool | None
    sup_ratio_ok: bool
    infimum: Fraction
    supremum: Fraction
    slack: Fraction
    bound: int


def valuation_checks(series: GradedSeries, v: MonomialValuation, p_max: int = 20, k_cap: int = 8) -> ValuationChecks:
    """Boundedness of v(b_p) when v(||D||) = 0 and the sup of v(J_p)/p against the inf of v(b_p)/p."""
    star = check_star(series, p_max, k_cap)
    if star.witness is None:
        raise Refused("no (*) witness in the tested range")
    order = asymptotic_order(series, v, p_max)
    bound = v.of_monomial(star.witness)
    tested = sorted(star.per_p_shifts)
    bounded = None
    if order.infimum == 0:
        bounded = all(base_order(series, v, p) <= bound for p in tested)
    sup = max(Fraction(v.of_ideal(star.asymptotic_ideals[p].ideal), p) for p in tested)
    slack = Fraction(bound, p_max)
    return ValuationChecks(bounded, abs(sup - order.infimum) <= slack, order.infimum, sup, slack, bound)


def subadditivity_check(series: GradedSeries, p: int, k: int, k_cap: int = 8) -> bool | None:
    """J(||kp D||) inside J(||p D||)^k as sheaves; None when either ideal has not stabilized."""
    big = asymptotic_multiplier_ideal(series, k * p, k_cap)
    small = asymptotic_multiplier_ideal(series, p, k_cap)
    if not (big.stabilized and small.stabilized):
        return None
    return small.ideal.power(k).sheaf_contains(big.ideal)


@dataclass(frozen=True)
class StarSum:
    holds: bool
    witness: tuple[int, ...] | None
    bound: tuple[int, ...]


def star_sum_check(s1: GradedSeries, s2: GradedSeries, p_max: int = 6, k_cap: int = 8) -> StarSum:
    """The sum series has a (*) witness bounded by the sum of the two witnesses."""
    w1 = check_star(s1, p_max, k_cap).witness
    w2 = check_star(s2, p_max, k_cap).witness
    if w1 is None or w2 is None:
        raise Refused("both summands need a (*) witness")
    total = check_star(sum_series(s1, s2), p_max, k_cap)
    bound = tuple(x + y for x, y in zip(w1, w2))
    ok = total.witness is not None and all(x <= y for x, y in zip(total.witness, bound))
    return StarSum(ok, total.witness, bound)
