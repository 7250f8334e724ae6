"""Monomial models of graded and multi-graded linear series.

A series on P^d is stored through dehomogenized exponents: a section of degree
m is a vector a in N^d with sum(a) <= m * bound, and the dropped coordinate
x_0 carries the exponent m * bound - sum(a).  ``bound`` is the degree of the
line bundle O(bound) the series lives in.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .geometry import (
    LatticeSummary,
    Polytope,
    PolyCone,
    cone_from_generators,
    from_inequalities,
    hull,
    lattice_summary,
    minkowski_sum,
    polytope_sum,
)

NO_SECTIONS = float("-inf")


class SeriesError(ValueError):
    pass


class InvalidFlag(SeriesError):
    """The flag sends some section of the series outside N^d."""


class NoSections(SeriesError):
    pass


class MultiplicativityError(SeriesError):
    def __init__(self, k, l, exponent):
        self.k, self.l, self.exponent = k, l, exponent
        super().__init__(f"S_{k} + S_{l} not contained in S_{k}+{l}: offending exponent {exponent}")


class CapExceeded(SeriesError):
    """A degree beyond the data the series was defined with was requested."""


# ---------------------------------------------------------------------------
# flags


@dataclass(frozen=True)
class Flag:
    """Torus-invariant coordinate flag.

    ``dehomogenizing_index`` selects the homogeneous coordinate set to 1;
    ``permutation`` (1-based, of the remaining d coordinates) orders the
    successive divisors; ``matrix`` is an optional unimodular change of
    coordinates applied last.
    """

    dehomogenizing_index: int = 0
    permutation: tuple[int, ...] | None = None
    matrix: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if self.matrix is not None:
            from .geometry import _det_int

            if abs(_det_int([list(r) for r in self.matrix])) != 1:
                raise InvalidFlag("flag matrix is not unimodular")

    def apply(self, homogeneous: Sequence[int]) -> tuple:
        v = list(homogeneous[: self.dehomogenizing_index]) + list(homogeneous[self.dehomogenizing_index + 1:])
        if self.permutation is not None:
            if sorted(self.permutation) != list(range(1, len(v) + 1)):
                raise InvalidFlag(f"permutation {self.permutation} is not a permutation of 1..{len(v)}")
            v = [v[i - 1] for i in self.permutation]
        if self.matrix is not None:
            v = [sum(r * x for r, x in zip(row, v)) for row in self.matrix]
        return tuple(v)

    @property
    def is_identity(self) -> bool:
        return self.dehomogenizing_index == 0 and self.permutation is None and self.matrix is None


IDENTITY_FLAG = Flag()


def homogenize(a: Sequence, m, bound) -> tuple:
    return (m * bound - sum(a),) + tuple(a)


def valuation(section: Sequence[int], m: int, flag: Flag = IDENTITY_FLAG, bound: int = 1) -> tuple[int, ...]:
    """Valuation vector of the monomial section x^a of degree m along a coordinate flag."""
    if any(x < 0 for x in section) or sum(section) > m * bound:
        raise SeriesError(f"{tuple(section)} is not a degree-{m} section of O({bound})")
    nu = flag.apply(homogenize(section, m, bound))
    if any(x < 0 for x in nu):
        raise InvalidFlag(f"flag sends {tuple(section)} to {nu}, outside N^d")
    return nu


def _affine_flag_map(flag: Flag, d: int, bound):
    """The affine map x -> flag(homogenize(x, 1, bound)) as (matrix, offset)."""
    zero = flag.apply(homogenize([0] * d, 1, bound))
    cols = []
    for j in range(d):
        e = [0] * d
        e[j] = 1
        img = flag.apply(homogenize(e, 1, bound))
        cols.append([x - z for x, z in zip(img, zero)])
    matrix = [[cols[j][i] for j in range(d)] for i in range(d)]
    return matrix, list(zero)


# ---------------------------------------------------------------------------
# single-graded series


class GradedSeries:
    """Base class: a rule m -> finite set S_m of exponent vectors, multiplicative."""

    mode = "abstract"

    def __init__(self, dim: int, bound: int):
        if dim < 0:
            raise SeriesError("negative ambient dimension")
        self.dim = dim
        self.bound = bound
        self._cache: dict[int, frozenset] = {}
        self._hull_cache: dict[int, tuple] = {}

    # subclasses implement _compute
    def _compute(self, m: int) -> Iterable[tuple[int, ...]]:
        raise NotImplementedError

    def sections(self, m: int) -> frozenset:
        if m < 0:
            raise SeriesError("negative degree")
        cached = self._cache.get(m)
        if cached is not None:
            return cached
        if m == 0:
            value = frozenset({(0,) * self.dim})
        else:
            value = frozenset(tuple(int(x) for x in a) for a in self._compute(m))
        # compute-then-publish: concurrent fills agree, first one wins
        return self._cache.setdefault(m, value)

    def count(self, m: int) -> int:
        return len(self.sections(m))

    def is_nonempty(self, m: int) -> bool:
        return bool(self.sections(m))

    def hull_vertices(self, m: int) -> tuple:
        """Vertices of conv(S_m) (empty tuple when S_m is empty)."""
        if m in self._hull_cache:
            return self._hull_cache[m]
        pts = self.sections(m)
        verts = tuple(tuple(int(x) for x in v) for v in hull(pts).vertices) if pts else ()
        return self._hull_cache.setdefault(m, verts)

    def exact_body(self) -> Polytope | None:
        """The Okounkov body for the identity flag when it is known in closed form."""
        return None

    def limit_body(self) -> Polytope | None:
        """Closed form of the limit body, used as a target (may differ from exact_body)."""
        return self.exact_body()

    def period_hint(self) -> int:
        """A period after which the section count is a polynomial on residue classes."""
        return 1

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, bound={self.bound})"


def _lattice_points(poly: Polytope, scale: int) -> list[tuple[int, ...]]:
    """Lattice points of scale * poly (poly full- or lower-dimensional)."""
    d = poly.dim
    if d == 0:
        return [()]
    ineqs = [(a, b * scale) for a, b in poly.integer_facets()]
    lo = [math.ceil(min(v[j] for v in poly.vertices) * scale) for j in range(d)]
    hi = [math.floor(max(v[j] for v in poly.vertices) * scale) for j in range(d)]
    out = []

    def rec(prefix):
        k = len(prefix)
        if k == d - 1:
            lo_last, hi_last = lo[-1], hi[-1]
            for a, b in ineqs:
                rest = b - sum(x * y for x, y in zip(a, prefix))
                c = a[-1]
                if c > 0:
                    hi_last = min(hi_last, math.floor(rest / c))
                elif c < 0:
                    lo_last = max(lo_last, math.ceil(rest / c))
                elif rest < 0:
                    return
            out.extend(tuple(prefix) + (t,) for t in range(lo_last, hi_last + 1))
            return
        for t in range(lo[k], hi[k] + 1):
            rec(prefix + [t])

    rec([])
    return out


class CompleteSeries(GradedSeries):
    """S_m = lattice points of m * P (complete linear series of a toric polytope)."""

    mode = "complete"

    def __init__(self, polytope: Polytope | Sequence, bound: int | None = None):
        poly = polytope if isinstance(polytope, Polytope) else hull(polytope)
        if any(x < 0 for v in poly.vertices for x in v):
            raise SeriesError("complete-mode polytope must lie in the nonnegative orthant")
        need = max(math.ceil(sum(v)) for v in poly.vertices)
        if bound is None:
            bound = need
        if need > bound:
            raise SeriesError(f"polytope does not fit in degree bound {bound}")
        super().__init__(poly.dim, bound)
        self.polytope = poly

    def _compute(self, m):
        return _lattice_points(self.polytope, m)

    def hull_vertices(self, m):
        if all(x.denominator == 1 for v in self.polytope.vertices for x in v):
            return tuple(tuple(int(x * m) for x in v) for v in self.polytope.vertices)
        return super().hull_vertices(m)

    def exact_body(self):
        return self.polytope

    def is_nonempty(self, m):
        if m in self._cache or any(x.denominator != 1 for v in self.polytope.vertices for x in v):
            return super().is_nonempty(m)
        return True

    def period_hint(self):
        den = 1
        for v in self.polytope.vertices:
            for x in v:
                den = math.lcm(den, x.denominator)
        return den


def projective_space(d: int, k: int = 1) -> CompleteSeries:
    """Complete series of O(k) on P^d."""
    verts = [tuple([0] * d)] + [tuple(k if j == i else 0 for j in range(d)) for i in range(d)]
    return CompleteSeries(hull(verts), bound=k)


class GeneratedSeries(GradedSeries):
    """Semigroup generated by (exponent, degree) pairs."""

    mode = "generated"

    def __init__(self, generators: Sequence[tuple[Sequence[int], int]], dim: int | None = None,
                 bound: int | None = None):
        gens = [(tuple(int(x) for x in g), int(k)) for g, k in generators]
        if not gens:
            if dim is None:
                raise SeriesError("generated series needs generators or an explicit dim")
        else:
            dims = {len(g) for g, _ in gens}
            if len(dims) != 1:
                raise SeriesError("generators of different dimensions")
            dim = dims.pop() if dim is None else dim
        for g, k in gens:
            if k < 1 or any(x < 0 for x in g) or len(g) != dim:
                raise SeriesError(f"bad generator {(g, k)}")
        need = max((math.ceil(Fraction(sum(g), k)) for g, k in gens), default=0)
        if bound is None:
            bound = need
        if need > bound:
            raise SeriesError(f"generators do not fit in degree bound {bound}")
        super().__init__(dim, bound)
        self.generators = tuple(sorted(set(gens)))

    def _compute(self, m):
        out = set()
        for g, k in self.generators:
            if k <= m:
                prev = self.sections(m - k)
                out.update(minkowski_sum(prev, [g]) if prev else ())
        return out

    def is_nonempty(self, m):
        if m in self._cache:
            return bool(self._cache[m])
        # m must be a sum of generator degrees
        degs = sorted({k for _, k in self.generators})
        reach = [True] + [False] * m
        for t in range(1, m + 1):
            reach[t] = any(k <= t and reach[t - k] for k in degs)
        return reach[m]

    def exact_body(self):
        if not self.generators:
            return None
        return hull([tuple(Fraction(x, k) for x in g) for g, k in self.generators])

    def hull_vertices(self, m):
        if self.generators and all(k == 1 for _, k in self.generators):
            base = self.exact_body()
            return tuple(tuple(int(x * m) for x in v) for v in base.vertices)
        return super().hull_vertices(m)

    def period_hint(self):
        return math.lcm(*[k for _, k in self.generators]) if self.generators else 1

    @property
    def stabilization_degree(self) -> int:
        return self.period_hint()


# named rules: (m, dim, bound, params) -> iterable of exponents
def _simplex_points(d, n):
    if d == 0:
        yield ()
        return
    for first in range(n + 1):
        for rest in _simplex_points(d - 1, n - first):
            yield (first,) + rest


def _rule_floor_ratio(m, d, bound, num, den, coord):
    cap = (num * m) // den
    c = coord - 1
    return (a for a in _simplex_points(d, m * bound) if a[c] <= cap)


def _rule_line(m, d, bound, coord=1):
    c = coord - 1
    return (tuple(i if j == c else 0 for j in range(d)) for i in range(m * bound + 1))


def _rule_trivial(m, d, bound):
    return [(0,) * d]


def _rule_principal(m, d, bound, vector):
    return [tuple(m * x for x in vector)]


def _rule_periodic(m, d, bound, period):
    return _simplex_points(d, m * bound) if m % period == 0 else []


RULES: dict[str, Callable] = {
    "floor_ratio": _rule_floor_ratio,
    "line": _rule_line,
    "trivial": _rule_trivial,
    "principal": _rule_principal,
    "periodic": _rule_periodic,
}


class RuleSeries(GradedSeries):
    """Series given by a named membership rule with integer parameters."""

    mode = "rule"

    def __init__(self, name: str, dim: int, bound: int = 1, **params):
        if name not in RULES:
            raise SeriesError(f"unknown rule {name!r}; known: {sorted(RULES)}")
        super().__init__(dim, bound)
        self.name = name
        self.params = dict(params)
        self._fn = RULES[name]

    def _compute(self, m):
        return self._fn(m, self.dim, self.bound, **self.params)

    def count(self, m):
        if self.name == "floor_ratio" and m not in self._cache and m > 0:
            # closed form: slices of the simplex along the capped coordinate
            d, n = self.dim, m * self.bound
            cap = min(n, (self.params["num"] * m) // self.params["den"])
            return sum(math.comb(n - t + d - 1, d - 1) for t in range(cap + 1))
        return super().count(m)

    def limit_body(self):
        d, b = self.dim, self.bound
        if self.name == "trivial":
            return hull([(0,) * d])
        if self.name == "principal":
            return hull([tuple(self.params["vector"])])
        if self.name == "line":
            c = self.params.get("coord", 1) - 1
            return hull([(0,) * d, tuple(b if j == c else 0 for j in range(d))])
        if self.name == "periodic":
            return projective_space(d, b).polytope
        if self.name == "floor_ratio":
            c = self.params.get("coord", 1) - 1
            normals = [tuple(-1 if j == i else 0 for j in range(d)) for i in range(d)]
            normals += [(1,) * d, tuple(1 if j == c else 0 for j in range(d))]
            rhs = [0] * d + [b, Fraction(self.params["num"], self.params["den"])]
            return from_inequalities(normals, rhs)
        return None

    def period_hint(self):
        if self.name == "floor_ratio":
            return int(self.params["den"])
        if self.name == "periodic":
            return int(self.params["period"])
        return 1

    def __repr__(self):
        args = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"RuleSeries({self.name}, dim={self.dim}, bound={self.bound}, {args})"


def floor_ratio_series(num: int, den: int, coord: int = 1, dim: int = 2, bound: int = 1) -> RuleSeries:
    return RuleSeries("floor_ratio", dim, bound, num=num, den=den, coord=coord)


class ExplicitSeries(GradedSeries):
    """Series given by a finite table degree -> exponent list."""

    mode = "explicit"

    def __init__(self, table: dict[int, Iterable[Sequence[int]]], dim: int, bound: int):
        super().__init__(dim, bound)
        self.table = {int(k): frozenset(tuple(int(x) for x in a) for a in v) for k, v in table.items()}
        self.max_degree = max(self.table, default=0)

    def _compute(self, m):
        if m > self.max_degree:
            raise CapExceeded(f"explicit series defined up to degree {self.max_degree}, asked {m}")
        return self.table.get(m, ())


class VeroneseSeries(GradedSeries):
    mode = "veronese"

    def __init__(self, parent: GradedSeries, h: int):
        super().__init__(parent.dim, parent.bound * h)
        self.parent = parent
        self.h = h

    def _compute(self, m):
        return self.parent.sections(self.h * m)

    def hull_vertices(self, m):
        return self.parent.hull_vertices(self.h * m)

    def exact_body(self):
        body = self.parent.exact_body()
        return None if body is None else body.scale(self.h)

    def limit_body(self):
        body = self.parent.limit_body()
        return None if body is None else body.scale(self.h)

    def period_hint(self):
        p = self.parent.period_hint()
        return p // math.gcd(p, self.h)


class RestrictedSeries(GradedSeries):
    """Restriction to the coordinate subvariety {x_j = 0 : j in J}."""

    mode = "restricted"

    def __init__(self, parent: GradedSeries, vanishing: Sequence[int]):
        self.vanishing = tuple(sorted(set(vanishing)))
        super().__init__(parent.dim - len(self.vanishing), parent.bound)
        self.parent = parent
        self.keep = [i for i in range(parent.dim) if i + 1 not in self.vanishing]

    def _compute(self, m):
        drop = [j - 1 for j in self.vanishing]
        return (tuple(a[i] for i in self.keep) for a in self.parent.sections(m) if all(a[j] == 0 for j in drop))

    def period_hint(self):
        return self.parent.period_hint()


class SumSeries(GradedSeries):
    """Per-degree Minkowski sum: the product series inside H^0(m(L1 + L2))."""

    mode = "sum"

    def __init__(self, first: GradedSeries, second: GradedSeries):
        if first.dim != second.dim:
            raise SeriesError("sum_series: dimension mismatch")
        super().__init__(first.dim, first.bound + second.bound)
        self.first, self.second = first, second

    def _compute(self, m):
        return minkowski_sum(self.first.sections(m), self.second.sections(m))

    def hull_vertices(self, m):
        a, b = self.first.hull_vertices(m), self.second.hull_vertices(m)
        if not a or not b:
            return ()
        return tuple(tuple(int(x) for x in v) for v in hull(minkowski_sum(a, b)).vertices)

    def exact_body(self):
        a, b = self.first.exact_body(), self.second.exact_body()
        if a is None or b is None:
            return None
        return polytope_sum(a, b)

    def limit_body(self):
        a, b = self.first.limit_body(), self.second.limit_body()
        if a is None or b is None:
            return None
        return polytope_sum(a, b)

    def period_hint(self):
        return math.lcm(self.first.period_hint(), self.second.period_hint())


# ---------------------------------------------------------------------------
# operations


def gamma(series: GradedSeries, m: int, flag: Flag = IDENTITY_FLAG) -> frozenset:
    """Valuation vectors of the degree-m sections."""
    if m < 0:
        raise SeriesError("negative degree")
    return frozenset(valuation(a, m, flag, series.bound) for a in series.sections(m))


def nonempty_degrees(series: GradedSeries, m_max: int) -> list[int]:
    return [m for m in range(1, m_max + 1) if series.is_nonempty(m)]


def exponent(series: GradedSeries, m_max: int) -> int:
    """gcd of the degrees m <= m_max carrying sections."""
    g = 0
    for m in range(1, m_max + 1):
        if series.is_nonempty(m):
            g = math.gcd(g, m)
            if g == 1:
                break
    if g == 0:
        raise NoSections(f"no sections in degrees 1..{m_max}")
    return g


def veronese(series: GradedSeries, h: int) -> GradedSeries:
    if h <= 0:
        raise SeriesError("veronese: h must be positive")
    if h == 1:
        return series
    if isinstance(series, CompleteSeries):
        return CompleteSeries(series.polytope.scale(h), bound=series.bound * h)
    return VeroneseSeries(series, h)


def restrict(series: GradedSeries, vanishing_coords: Iterable[int]) -> GradedSeries:
    """Restrict to V = {x_j = 0, j in J} (1-based dehomogenized coordinates)."""
    J = sorted(set(vanishing_coords))
    if any(j < 1 or j > series.dim for j in J):
        raise SeriesError(f"coordinates {J} not in 1..{series.dim}")
    if len(J) > series.dim or (len(J) == series.dim and series.dim == 0):
        raise SeriesError("cannot restrict away every coordinate")
    if not J:
        return series
    keep = [i for i in range(series.dim) if i + 1 not in J]
    if isinstance(series, CompleteSeries):
        face = [v for v in series.polytope.vertices if all(v[j - 1] == 0 for j in J)]
        if face:
            return CompleteSeries(hull([tuple(v[i] for i in keep) for v in face]), bound=series.bound)
    if isinstance(series, GeneratedSeries):
        gens = [(tuple(g[i] for i in keep), k) for g, k in series.generators if all(g[j - 1] == 0 for j in J)]
        return GeneratedSeries(gens, dim=len(keep), bound=series.bound)
    return RestrictedSeries(series, J)


def sum_series(s1: GradedSeries, s2: GradedSeries) -> GradedSeries:
    return SumSeries(s1, s2)


def audit(series: GradedSeries, working_degree: int) -> None:
    """Check S_k + S_l inside S_{k+l} for all k + l <= working_degree."""
    for k in range(0, working_degree + 1):
        for l in range(k, working_degree - k + 1):
            target = series.sections(k + l)
            for v in minkowski_sum(series.sections(k), series.sections(l)):
                if v not in target:
                    raise MultiplicativityError(k, l, v)
    for m in range(working_degree + 1):
        for a in series.sections(m):
            if len(a) != series.dim or any(x < 0 for x in a) or sum(a) > m * series.bound:
                raise SeriesError(f"degree-{m} exponent {a} violates the degree bound {series.bound}")


class _LatticeBuilder:
    """Incremental integer lattice with cheap membership tests (Hermite basis)."""

    def __init__(self, dim):
        self.dim = dim
        self.rows: list[list[int]] = []

    def _reduce(self, v):
        v = list(v)
        for row in self.rows:
            c = next(i for i, x in enumerate(row) if x)
            if v[c]:
                if v[c] % row[c]:
                    return v, False
                q = v[c] // row[c]
                v = [x - q * y for x, y in zip(v, row)]
        return v, not any(v)

    def add(self, v):
        _, inside = self._reduce(v)
        if inside:
            return
        from .geometry import hermite_rows

        self.rows = hermite_rows(self.rows + [list(v)])

    def summary(self) -> LatticeSummary:
        return lattice_summary(self.rows, self.dim)


def difference_lattice(points: Iterable[Sequence[int]], dim: int) -> LatticeSummary:
    pts = list(points)
    b = _LatticeBuilder(dim)
    if pts:
        p0 = pts[0]
        for p in pts[1:]:
            b.add([x - y for x, y in zip(p, p0)])
    return b.summary()


@dataclass(frozen=True)
class GFReport:
    """Generic finiteness of the monomial maps phi_m.

    ``per_degree`` lists (m, rank, index-or-None) of the difference lattice of S_m;
    ``degree`` is the map degree delta (None when no degree reaches full rank).
    """

    is_gf: bool
    witness_degree: int | None
    degree: int | None
    difference_lattice: LatticeSummary | None
    per_degree: tuple = field(default=())


def gf_report(series: GradedSeries, m_max: int) -> GFReport:
    if m_max < 1:
        raise SeriesError("m_max must be >= 1")
    rows = []
    best = None
    witness = None
    for m in nonempty_degrees(series, m_max):
        lat = difference_lattice(sorted(series.sections(m)), series.dim)
        rows.append((m, lat.rank, lat.index))
        if lat.full_rank:
            if witness is None:
                witness = m
            if best is None or lat.index < best.index:
                best = lat
    if not rows:
        raise NoSections(f"no sections in degrees 1..{m_max}")
    return GFReport(best is not None, witness, best.index if best else None, best, tuple(rows))


def iitaka_dim(series: GradedSeries, m_max: int):
    """Largest rank of a difference lattice over m <= m_max; NO_SECTIONS if none."""
    degs = nonempty_degrees(series, m_max)
    if not degs:
        return NO_SECTIONS
    return max(difference_lattice(sorted(series.sections(m)), series.dim).rank for m in degs)


def semigroup_lattice(series: GradedSeries, flag: Flag, m_max: int) -> tuple[LatticeSummary, int | None]:
    """Group generated by {(nu, m)} in Z^{d+1} and the index of its degree-0 slice.

    The degree coordinate is placed first so that the Hermite rows after the
    first span the slice {v : (v, 0) in group}.
    """
    d = series.dim
    b = _LatticeBuilder(d + 1)
    for m in range(1, m_max + 1):
        for nu in gamma(series, m, flag):
            b.add((m,) + nu)
    summary = b.summary()
    rows = [r for r in summary.basis if r[0] == 0]
    slice_lat = lattice_summary([r[1:] for r in rows], d)
    return summary, slice_lat.index


# ---------------------------------------------------------------------------
# multi-graded series


class MultiGradedSeries:
    """Base class for W indexed by N^r."""

    mode = "abstract"

    def __init__(self, dim: int, arity: int, bounds: Sequence[int]):
        self.dim = dim
        self.arity = arity
        self.bounds = tuple(bounds)
        self._cache: dict = {}

    def _compute(self, m: tuple) -> Iterable[tuple[int, ...]]:
        raise NotImplementedError

    def bound_at(self, m: Sequence[int]) -> int:
        return sum(x * b for x, b in zip(m, self.bounds))

    def sections(self, m: Sequence[int]) -> frozenset:
        m = tuple(int(x) for x in m)
        if len(m) != self.arity or any(x < 0 for x in m):
            raise SeriesError(f"bad multidegree {m}")
        cached = self._cache.get(m)
        if cached is not None:
            return cached
        if not any(m):
            value = frozenset({(0,) * self.dim})
        else:
            value = frozenset(self._compute(m))
        return self._cache.setdefault(m, value)

    def hull_vertices(self, m) -> tuple:
        pts = self.sections(m)
        return tuple(tuple(int(x) for x in v) for v in hull(pts).vertices) if pts else ()

    def induced(self, a: Sequence[int]) -> GradedSeries:
        return InducedSeries(self, a)

    def exact_body_at(self, a, limit=False) -> Polytope | None:
        return None


class ProductMultiSeries(MultiGradedSeries):
    """W_m = S^1_{m_1} + ... + S^r_{m_r} for graded series on the same P^d."""

    mode = "product"

    def __init__(self, factors: Sequence[GradedSeries]):
        dims = {f.dim for f in factors}
        if len(dims) != 1:
            raise SeriesError("factors of different dimensions")
        super().__init__(dims.pop(), len(factors), [f.bound for f in factors])
        self.factors = tuple(factors)

    def _compute(self, m):
        acc = frozenset({(0,) * self.dim})
        for f, k in zip(self.factors, m):
            acc = minkowski_sum(acc, f.sections(k))
            if not acc:
                break
        return acc

    def hull_vertices(self, m):
        acc = {(0,) * self.dim}
        for f, k in zip(self.factors, m):
            vs = f.hull_vertices(k)
            if not vs:
                return ()
            acc = minkowski_sum(acc, vs)
        return tuple(tuple(int(x) for x in v) for v in hull(acc).vertices)

    def exact_body_at(self, a, limit=False):
        body = None
        for f, k in zip(self.factors, a):
            if k == 0:
                continue
            fb = f.limit_body() if limit else f.exact_body()
            if fb is None:
                return None
            fb = fb.scale(k)
            body = fb if body is None else polytope_sum(body, fb)
        return body


class FunctionMultiSeries(MultiGradedSeries):
    """W_m given by a Python callable (rule mode for multi-graded series)."""

    mode = "function"

    def __init__(self, dim: int, arity: int, bounds: Sequence[int], fn: Callable):
        super().__init__(dim, arity, bounds)
        self.fn = fn

    def _compute(self, m):
        return (tuple(a) for a in self.fn(m))


class InducedSeries(GradedSeries):
    """Single-graded series k -> W_{k a}."""

    mode = "induced"

    def __init__(self, multi: MultiGradedSeries, a: Sequence[int]):
        self.a = tuple(int(x) for x in a)
        super().__init__(multi.dim, multi.bound_at(self.a))
        self.multi = multi

    def _compute(self, m):
        return self.multi.sections(tuple(m * x for x in self.a))

    def hull_vertices(self, m):
        return self.multi.hull_vertices(tuple(m * x for x in self.a))

    def exact_body(self):
        return self.multi.exact_body_at(self.a)

    def limit_body(self):
        return self.multi.exact_body_at(self.a, limit=True)

    def period_hint(self):
        if isinstance(self.multi, ProductMultiSeries):
            return math.lcm(*[f.period_hint() for f, k in zip(self.multi.factors, self.a) if k] or [1])
        return 1


def multi_valuation(section, m: Sequence[int], flag: Flag, multi: MultiGradedSeries):
    return valuation(section, 1, flag, multi.bound_at(m))


def support_cone(multi: MultiGradedSeries, box: int) -> PolyCone:
    """Cone spanned by the multidegrees in [0, box]^r carrying sections."""
    if box < 1:
        raise SeriesError("box must be >= 1")
    idx = [m for m in itertools.product(range(box + 1), repeat=multi.arity)
           if any(m) and multi.sections(m)]
    if not idx:
        raise NoSections("no nonzero multidegree with sections in the box")
    return cone_from_generators(idx)
