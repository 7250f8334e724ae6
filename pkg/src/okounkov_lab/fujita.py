"""Fujita approximation and multi-graded bodies.

Point sets that grow with the degree are handled as dense boolean grids so
that k-fold Minkowski sums cost a few array shifts per summand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .geometry import PolyCone, Polytope, cone_fiber, cone_from_generators
from .okounkov import certified_root_inequality, okounkov_body
from .series import (
    IDENTITY_FLAG,
    Flag,
    GradedSeries,
    MultiGradedSeries,
    SeriesError,
    exponent,
    gf_report,
    multi_valuation,
    support_cone,
)
from .tables import ConvergenceTable


class PreconditionError(SeriesError):
    """A hypothesis of the construction fails; the message names the clause."""


class OutOfSupport(SeriesError):
    """The requested multidegree is not in the interior of the support cone."""


# ---------------------------------------------------------------------------
# dense grids


def _to_grid(points, shape) -> np.ndarray:
    g = np.zeros(shape, dtype=bool)
    if points:
        arr = np.array(sorted(points), dtype=np.int64).reshape(len(points), len(shape))
        g[tuple(arr.T)] = True
    return g


def _grid_sum(grid: np.ndarray, offsets, shape) -> np.ndarray:
    """{x + o : x in grid, o in offsets} clipped to ``shape`` (nothing is lost if shape is large enough)."""
    out = np.zeros(shape, dtype=bool)
    src = tuple(slice(0, s) for s in grid.shape)
    for o in offsets:
        dst = tuple(slice(int(x), min(int(x) + s, t)) for x, s, t in zip(o, grid.shape, shape))
        if any(sl.start >= sl.stop for sl in dst):
            continue
        cut = tuple(slice(0, sl.stop - sl.start) for sl in dst)
        out[dst] |= grid[src][cut]
    return out


def _from_grid(grid: np.ndarray) -> frozenset:
    return frozenset(tuple(int(x) for x in p) for p in np.argwhere(grid))


# ---------------------------------------------------------------------------
# T_{k,p}


def _tkp_grids(series: GradedSeries, p: int, k_max: int):
    """Yield (k, grid of T_{k,p}) for k = 1..k_max."""
    base = series.sections(p)
    if not base:
        raise SeriesError(f"S_{p} is empty")
    n = k_max * p * series.bound
    shape = (n + 1,) * series.dim
    offsets = sorted(base)
    grid = _to_grid(base, shape)
    yield 1, grid
    for k in range(2, k_max + 1):
        grid = _grid_sum(grid, offsets, shape)
        yield k, grid


def tkp(series: GradedSeries, k: int, p: int) -> frozenset:
    """k-fold Minkowski sum of S_p: the image of the k-th symmetric power of W_p in W_{kp}."""
    if k < 1 or p < 1:
        raise SeriesError("k and p must be positive")
    if series.dim == 0:
        return series.sections(k * p) if series.sections(p) else frozenset()
    grid = None
    for _, grid in _tkp_grids(series, p, k):
        pass
    out = _from_grid(grid)
    if not out <= series.sections(k * p):
        raise SeriesError(f"T_{{{k},{p}}} is not contained in S_{k * p}: series is not multiplicative")
    return out


@dataclass(frozen=True)
class FujitaReport:
    """Outcome of the Fujita scan.

    ``p0`` is None when no p within the caps qualifies.  ``grid`` maps each
    tested p to its table k -> #T_{k,p} / #S_{kp}; ``estimates`` maps p to
    d! #T_{k_cap,p} / (k_cap p)^d and ``gaps`` to (#S - #T) d! / (k_cap p)^d.
    """

    p0: int | None
    epsilon: Fraction
    k_cap: int
    ratios: ConvergenceTable | None
    limit_estimate: Fraction | None
    achieved_epsilon: Fraction | None
    grid: dict = field(default_factory=dict)
    estimates: dict = field(default_factory=dict)
    gaps: dict = field(default_factory=dict)
    rising: dict = field(default_factory=dict)

    @property
    def reached(self) -> bool:
        return self.p0 is not None


def fujita_row(series: GradedSeries, p: int, k_cap: int) -> ConvergenceTable:
    """Ratios #T_{k,p} / #S_{kp} for k = 1..k_cap."""
    rows = []
    if series.dim == 0:
        for k in range(1, k_cap + 1):
            rows.append((k, Fraction(1)))
        return ConvergenceTable(f"T/S p={p}", tuple(rows), Fraction(1))
    for k, grid in _tkp_grids(series, p, k_cap):
        t = int(grid.sum())
        s = series.count(k * p)
        if t > s:
            raise SeriesError(f"#T_{{{k},{p}}} > #S_{k * p}: series is not multiplicative")
        rows.append((k, Fraction(t, s)))
    return ConvergenceTable(f"T/S p={p}", tuple(rows), Fraction(1))


def fujita_report(series: GradedSeries, epsilon=Fraction(1, 100), p_cap: int = 14, k_cap: int = 20,
                  criterion: str = "volume") -> FujitaReport:
    """Smallest p <= p_cap whose Fujita approximation is epsilon-close at k = k_cap.

    With ``criterion="volume"`` the test is d! (#S_{kp} - #T_{k,p}) / (kp)^d <= d! epsilon,
    i.e. the approximation loses at most epsilon of normalized volume against the
    series itself at the same degree.  ``criterion="ratio"`` tests
    1 - #T_{k,p}/#S_{kp} < epsilon instead.
    """
    eps = Fraction(epsilon)
    if criterion not in ("volume", "ratio"):
        raise ValueError(f"unknown criterion {criterion!r}")
    e = exponent(series, p_cap)
    d = series.dim
    fact = math.factorial(d)
    grid, estimates, gaps, rising = {}, {}, {}, {}
    p0 = None
    for p in range(e, p_cap + 1, e):
        if not series.is_nonempty(p):
            continue
        row = fujita_row(series, p, k_cap)
        grid[p] = row
        m = k_cap * p
        s_count = series.count(m)
        t_count = row.last * s_count
        estimates[p] = fact * t_count / m ** d
        gaps[p] = fact * (s_count - t_count) / m ** d
        vals = row.values
        rising[p] = len(vals) > 1 and vals[-1] > vals[-2]
        ok = gaps[p] <= fact * eps if criterion == "volume" else 1 - row.last < eps
        if ok and p0 is None:
            p0 = p
    if p0 is None:
        return FujitaReport(None, eps, k_cap, None, None, None, grid, estimates, gaps, rising)
    return FujitaReport(p0, eps, k_cap, grid[p0], estimates[p0], gaps[p0] / fact, grid, estimates, gaps, rising)


# ---------------------------------------------------------------------------
# multi-graded bodies


@dataclass(frozen=True)
class GlobalBody:
    cone: PolyCone
    support: PolyCone
    truncation: int
    dim: int
    arity: int


def _check_gf_prime(multi: MultiGradedSeries, box: int) -> PolyCone:
    support = support_cone(multi, box)
    if not support.has_interior:
        raise PreconditionError("(GF') clause (i) fails: the support cone has empty interior")
    a0 = tuple(sum(r[i] for r in support.rays) for i in range(multi.arity))
    g = math.gcd(*a0)
    a0 = tuple(x // g for x in a0)
    if not gf_report(multi.induced(a0), 6).is_gf:
        raise PreconditionError(f"(GF') clause (iii) fails: the series along {a0} is not generically finite")
    return support


def global_body(multi: MultiGradedSeries, flag: Flag = IDENTITY_FLAG, box: int = 7) -> GlobalBody:
    """Cone over {(nu(s), m)} for multidegrees m in [0, box]^r."""
    import itertools

    support = _check_gf_prime(multi, box)
    pts = set()
    for m in itertools.product(range(box + 1), repeat=multi.arity):
        if not any(m):
            continue
        for v in multi.hull_vertices(m):
            pts.add(tuple(multi_valuation(v, m, flag, multi)) + m)
    return GlobalBody(cone_from_generators(pts), support, box, multi.dim, multi.arity)


def fiber_body(gb: GlobalBody, a: Sequence, allow_boundary: bool = False) -> Polytope:
    """Slice of the global cone over a.

    Outside the interior of the support cone the slice need not be the body of
    the induced series, so boundary points are refused unless ``allow_boundary``.
    """
    a = tuple(Fraction(x) for x in a)
    if len(a) != gb.arity:
        raise SeriesError(f"expected a vector of length {gb.arity}")
    inside = gb.support.contains(a) if allow_boundary else gb.support.in_interior(a)
    if not inside:
        where = "support cone" if allow_boundary else "interior of the support cone"
        raise OutOfSupport(f"{tuple(str(x) for x in a)} is not in the {where}")
    return cone_fiber(gb.cone, a)


@dataclass(frozen=True)
class FiberScan:
    volumes: tuple[tuple[tuple, Fraction], ...]
    homogeneity_ok: bool
    log_concavity: tuple[tuple[tuple, tuple, bool | None, str], ...]

    @property
    def log_concave_ok(self) -> bool:
        return all(v is True for _, _, v, _ in self.log_concavity)


def fiber_volume_scan(gb: GlobalBody, grid: Sequence[Sequence], scales: Sequence[int] = (2, 3),
                      pairs: str = "all") -> FiberScan:
    """Fiber volumes on a grid, with exact homogeneity and certified midpoint log-concavity."""
    d = gb.dim
    pts = [tuple(Fraction(x) for x in a) for a in grid]
    vols = {a: fiber_body(gb, a).volume() for a in pts}
    homog = all(fiber_body(gb, tuple(k * x for x in a)).volume() == k ** d * vols[a] for a in pts for k in scales)
    if pairs == "all":
        combos = [(a, b) for i, a in enumerate(pts) for b in pts[i + 1:]]
    else:
        combos = list(zip(pts, pts[1:]))
    checks = []
    for a, b in combos:
        mid = tuple((x + y) / 2 for x, y in zip(a, b))
        vm = fiber_body(gb, mid).volume()
        verdict, method = certified_root_inequality(
            [(1, vm)], [(Fraction(1, 2), vols[a]), (Fraction(1, 2), vols[b])], d)
        checks.append((a, b, verdict, method))
    return FiberScan(tuple((a, vols[a]) for a in pts), homog, tuple(checks))


# ---------------------------------------------------------------------------
# W^(p)


class SubSeries(MultiGradedSeries):
    """W^(p): sums of pieces of total degree p; zero unless p divides |m|."""

    mode = "subseries"

    def __init__(self, parent: MultiGradedSeries, p: int):
        if p < 1:
            raise SeriesError("p must be positive")
        super().__init__(parent.dim, parent.arity, parent.bounds)
        self.parent = parent
        self.p = p
        self._grids: dict = {}
        self._pieces = None

    def _shape(self, m):
        return (self.bound_at(m) + 1,) * self.dim

    def pieces(self):
        """Nonempty W_n with |n| = p, as (n, sorted sections)."""
        if self._pieces is None:
            import itertools

            out = []
            for n in itertools.product(range(self.p + 1), repeat=self.arity):
                if sum(n) == self.p:
                    s = self.parent.sections(n)
                    if s:
                        out.append((n, sorted(s)))
            self._pieces = out
        return self._pieces

    def grid(self, m) -> np.ndarray | None:
        """Boolean grid of W^(p)_m inside [0, bound_at(m)]^d; None when empty."""
        m = tuple(m)
        if m in self._grids:
            return self._grids[m]
        if sum(m) % self.p:
            return self._grids.setdefault(m, None)
        if not any(m):
            return self._grids.setdefault(m, _to_grid([(0,) * self.dim], (1,) * self.dim))
        shape = self._shape(m)
        out = None
        for n, sec in self.pieces():
            rest = tuple(x - y for x, y in zip(m, n))
            if any(x < 0 for x in rest):
                continue
            g = self.grid(rest)
            if g is None:
                continue
            s = _grid_sum(g, sec, shape)
            out = s if out is None else (out | s)
        if out is not None and not out.any():
            out = None
        return self._grids.setdefault(m, out)

    def count(self, m) -> int:
        g = self.grid(m)
        return 0 if g is None else int(g.sum())

    def _compute(self, m):
        g = self.grid(m)
        if g is None:
            return frozenset()
        out = _from_grid(g)
        if not out <= self.parent.sections(m):
            raise SeriesError(f"W^({self.p})_{m} is not contained in W_{m}")
        return out


def multigraded_subseries(multi: MultiGradedSeries, p: int) -> SubSeries:
    return SubSeries(multi, p)


def _parent_count(multi: MultiGradedSeries, m) -> int:
    counter = getattr(multi, "count", None)
    return counter(m) if counter else len(multi.sections(m))


@dataclass(frozen=True)
class MultiFujitaReport:
    """Uniform multi-graded Fujita scan.

    ``table`` rows are (p, a, h, #W^(p)_{ha} / #W_{ha}); h = 0 marks a pair
    the truncation cannot reach.  ``per_direction_p0[a]`` is the smallest p
    passing at a alone; ``induced_fujita_p0[a]`` is the Fujita p0 of the
    single-graded series k -> W_{ka} (k-fold sums of W_{qa}), in total degree q|a|.
    """

    p0: int | None
    epsilon: Fraction
    truncation: int
    table: tuple[tuple[int, tuple, int, Fraction], ...]
    per_direction_p0: dict
    induced_fujita_p0: dict


def multigraded_fujita_check(multi: MultiGradedSeries, grid: Sequence[Sequence[int]], epsilon=Fraction(1, 10),
                             p_cap: int = 14, truncation: int = 140, box: int = 7) -> MultiFujitaReport:
    """Smallest p <= p_cap with 1 - #W^(p)_{ha} / #W_{ha} < epsilon for every a in the grid.

    For each (p, a) the degree h is the largest with h|a| <= truncation and
    p dividing h|a|, so numerator and denominator share one truncation.
    """
    eps = Fraction(epsilon)
    support = _check_gf_prime(multi, box)
    vecs = [tuple(int(x) for x in a) for a in grid]
    for a in vecs:
        if not support.in_interior(a):
            raise OutOfSupport(f"grid point {a} is not in the interior of the support cone")
    table = []
    p0 = None
    per_dir = {a: None for a in vecs}
    for p in range(1, p_cap + 1):
        sub = SubSeries(multi, p)
        ok = True
        for a in vecs:
            size = sum(a)
            step = p // math.gcd(p, size)
            h = (truncation // size) // step * step
            if h == 0:
                table.append((p, a, 0, Fraction(0)))
                ok = False
                continue
            m = tuple(h * x for x in a)
            ratio = Fraction(sub.count(m), _parent_count(multi, m))
            table.append((p, a, h, ratio))
            if 1 - ratio >= eps:
                ok = False
            elif per_dir[a] is None:
                per_dir[a] = p
        if ok and p0 is None:
            p0 = p
    induced = {}
    for a in vecs:
        size = sum(a)
        series = multi.induced(a)
        induced[a] = None
        for q in range(1, p_cap // size + 1):
            k = truncation // (q * size)
            if k < 1 or not series.is_nonempty(q):
                continue
            if 1 - fujita_row(series, q, k).last < eps:
                induced[a] = q * size
                break
    return MultiFujitaReport(p0, eps, truncation, tuple(table), per_dir, induced)
