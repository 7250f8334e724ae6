"""Exact rational geometry: hulls, volumes, Minkowski sums, lattices and cones.

Everything here works over :class:`fractions.Fraction` and Python integers.
Hull computations clear denominators first and run on integer coordinates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 6

Vec = tuple


class GeometryError(ValueError):
    """Malformed geometric input (dimension mismatch, empty set, ...)."""


class EmptyFiber(Exception):
    """The requested cone fiber is empty: the point lies outside the projection."""


# ---------------------------------------------------------------------------
# small exact linear algebra


def _det_int(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def _normal(points: Sequence[Sequence[int]]) -> list[int]:
    """Integer normal of the hyperplane through d points in Z^d (generalized cross product)."""
    q0 = points[0]
    d = len(q0)
    diffs = [[p[j] - q0[j] for j in range(d)] for p in points[1:]]
    out = []
    for j in range(d):
        minor = [row[:j] + row[j + 1:] for row in diffs]
        c = _det_int(minor)
        out.append(c if j % 2 == 0 else -c)
    return out


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of {x : row . x = 0 for every row}."""
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        den = 1
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
        basis.append(_primitive([int(x * den) for x in v]))
    return basis


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square system, or None when singular."""
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# integer lattices


def hermite_rows(vectors: Iterable[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form; returns the nonzero rows (a lattice basis)."""
    m = [list(map(int, v)) for v in vectors]
    m = [r for r in m if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[piv] = m[piv], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c] != 0:
                    q = m[i][c] // m[r][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    if m[i][c] != 0:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    return [row for row in m[:r]]


def smith_invariants(vectors: Iterable[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of the integer matrix whose rows are ``vectors``."""
    m = [list(map(int, v)) for v in vectors if any(v)]
    if not m:
        return []
    rows, cols = len(m), len(m[0])
    diag = []
    t = 0
    while t < min(rows, cols):
        entries = [(abs(m[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if m[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        m[t], m[i] = m[i], m[t]
        for row in m:
            row[t], row[j] = row[j], row[t]
        while True:
            changed = False
            p = m[t][t]
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // p
                    m[i] = [x - q * y for x, y in zip(m[i], m[t])]
                    if m[i][t]:
                        m[t], m[i] = m[i], m[t]
                        changed = True
                        break
            if changed:
                continue
            p = m[t][t]
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // p
                    for row in m:
                        row[j] -= q * row[t]
                    if m[t][j]:
                        for row in m:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if changed:
                continue
            # divisibility condition on the remaining block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if m[i][j] % p), None)
            if bad is None:
                break
            m[t] = [x + y for x, y in zip(m[t], m[bad[0]])]
        diag.append(abs(m[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class LatticeSummary:
    """Subgroup of Z^dim generated by a finite set of vectors.

    ``index`` is None when the subgroup has rank below ``dim`` (infinite index).
    """

    rank: int
    index: int | None
    basis: tuple[tuple[int, ...], ...]
    dim: int

    @property
    def full_rank(self) -> bool:
        return self.rank == self.dim


def lattice_summary(vectors: Iterable[Sequence[int]], dim: int) -> LatticeSummary:
    vecs = [tuple(int(x) for x in v) for v in vectors]
    for v in vecs:
        if len(v) != dim:
            raise GeometryError(f"vector {v} is not in Z^{dim}")
    basis = hermite_rows(vecs)
    rank = len(basis)
    index = None
    if rank == dim:
        index = math.prod(smith_invariants(basis)) if dim else 1
    return LatticeSummary(rank, index, tuple(tuple(r) for r in basis), dim)


# ---------------------------------------------------------------------------
# point sets


def minkowski_sum(a: Iterable[Sequence[int]], b: Iterable[Sequence[int]]) -> frozenset:
    """Exact pairwise-sum set of two finite integer point sets."""
    a = {tuple(p) for p in a}
    b = {tuple(p) for p in b}
    if not a or not b:
        return frozenset()
    da = {len(p) for p in a}
    db = {len(p) for p in b}
    if len(da | db) != 1:
        raise GeometryError("minkowski_sum: dimension mismatch")
    d = da.pop()
    if d == 0:
        return frozenset({()})
    if len(a) * len(b) <= 4096:
        return frozenset(tuple(x + y for x, y in zip(p, q)) for p in a for q in b)
    return frozenset(_minkowski_dense(a, b, d))


def _minkowski_dense(a: set, b: set, d: int) -> list[tuple[int, ...]]:
    # shift-or on a boolean grid; exact
    if len(a) < len(b):
        a, b = b, a
    arr_a = np.array(sorted(a), dtype=np.int64)
    arr_b = np.array(sorted(b), dtype=np.int64)
    lo_a, hi_a = arr_a.min(0), arr_a.max(0)
    lo_b, hi_b = arr_b.min(0), arr_b.max(0)
    shape_a = hi_a - lo_a + 1
    shape = tuple(int(x) for x in shape_a + (hi_b - lo_b))
    grid_a = np.zeros(tuple(int(x) for x in shape_a), dtype=bool)
    grid_a[tuple((arr_a - lo_a).T)] = True
    out = np.zeros(shape, dtype=bool)
    for q in arr_b - lo_b:
        sl = tuple(slice(int(o), int(o + s)) for o, s in zip(q, shape_a))
        out[sl] |= grid_a
    pts = np.argwhere(out) + (lo_a + lo_b)
    return [tuple(int(x) for x in p) for p in pts]


def _as_fraction_points(points) -> list[tuple[Fraction, ...]]:
    pts = {tuple(Fraction(x) for x in p) for p in points}
    if not pts:
        raise GeometryError("empty point set")
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise GeometryError("points of different dimensions")
    return sorted(pts)


def _column_extremes(points: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    # hull(points) == hull(extremes of each line parallel to the last axis)
    if not points or len(points[0]) < 2:
        return points
    lo: dict = {}
    hi: dict = {}
    for p in points:
        key = p[:-1]
        v = p[-1]
        if key not in lo or v < lo[key]:
            lo[key] = v
        if key not in hi or v > hi[key]:
            hi[key] = v
    out = {k + (v,) for k, v in lo.items()}
    out.update(k + (v,) for k, v in hi.items())
    return sorted(out)


# ---------------------------------------------------------------------------
# convex hull


def _full_dim_hull(points: list[tuple[int, ...]], simplex: list[int]):
    """Incremental (beneath-beyond) hull of integer points spanning Z^d affinely.

    Returns the list of simplicial boundary facets as (vertex index tuple, normal, rhs)
    with normal . x <= rhs valid on the hull.
    """
    d = len(points[0])
    csum = [sum(points[i][j] for i in simplex) for j in range(d)]
    scale = d + 1

    def make_facet(idx):
        pts = [points[i] for i in idx]
        a = _normal(pts)
        b = _dot(a, pts[0])
        if _dot(a, csum) > scale * b:
            a = [-x for x in a]
            b = -b
        return (tuple(idx), tuple(a), b)

    facets = [make_facet([v for v in simplex if v != skip]) for skip in simplex]
    in_simplex = set(simplex)
    for i, p in enumerate(points):
        if i in in_simplex:
            continue
        if not any(_dot(f[1], p) > f[2] for f in facets):
            continue
        # weakly visible facets are replaced too, which keeps new facets nondegenerate
        visible = [f for f in facets if _dot(f[1], p) >= f[2]]
        ridge_count: dict = {}
        for f in visible:
            idx = f[0]
            for k in range(d):
                ridge = tuple(sorted(idx[:k] + idx[k + 1:]))
                ridge_count[ridge] = ridge_count.get(ridge, 0) + 1
        vis_ids = {id(f) for f in visible}
        facets = [f for f in facets if id(f) not in vis_ids]
        for ridge, cnt in ridge_count.items():
            if cnt == 1:
                facets.append(make_facet(list(ridge) + [i]))
    return facets


@dataclass(frozen=True, eq=False)
class Polytope:
    """Rational polytope with V- and H-representations.

    ``facets`` holds inequalities (normal, rhs) meaning normal . x <= rhs.  For
    lower-dimensional polytopes the affine hull is encoded by pairs of opposite
    inequalities.  ``simplices`` is a boundary triangulation (full-dimensional
    case only) used as an independent volume route.
    """

    vertices: tuple[tuple[Fraction, ...], ...]
    facets: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    dim: int
    affine_dim: int
    simplices: tuple = field(default=(), repr=False)

    def __post_init__(self):
        for v in self.vertices:
            for a, b in self.facets:
                if _dot(a, v) > b:
                    raise GeometryError("V-rep and H-rep disagree")

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.dim == other.dim and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.dim, self.vertices))

    def __repr__(self):
        verts = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"Polytope(dim={self.dim}, vertices=[{verts}])"

    def contains(self, point) -> bool:
        p = [Fraction(x) for x in point]
        return all(_dot(a, p) <= b for a, b in self.facets)

    def contains_polytope(self, other: "Polytope") -> bool:
        return all(self.contains(v) for v in other.vertices)

    def scale(self, k) -> "Polytope":
        k = Fraction(k)
        return hull([tuple(k * x for x in v) for v in self.vertices])

    def map_affine(self, matrix, offset) -> "Polytope":
        return hull([tuple(_dot(row, v) + o for row, o in zip(matrix, offset)) for v in self.vertices])

    def volume(self) -> Fraction:
        return volume(self)

    def integer_facets(self):
        """Facets as (integer normal, rational rhs), normal primitive."""
        out = []
        for a, b in self.facets:
            den = 1
            for x in a:
                den = den * x.denominator // math.gcd(den, x.denominator)
            ia = [int(x * den) for x in a]
            g = 0
            for x in ia:
                g = math.gcd(g, x)
            out.append((tuple(x // g for x in ia), b * den / g))
        return out


def _canonical_ineq(a: Sequence, b) -> tuple[tuple[Fraction, ...], Fraction]:
    # scale so the normal is a primitive integer vector
    a = [Fraction(x) for x in a]
    b = Fraction(b)
    den = 1
    for x in a:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ia = [int(x * den) for x in a]
    g = 0
    for x in ia:
        g = math.gcd(g, x)
    return tuple(Fraction(x, g) for x in ia), b * den / g


def hull(points, max_dim: int = MAX_DIM) -> Polytope:
    """Convex hull of a finite set of rational points.

    The returned vertices are a subset of the input points.  Lower-dimensional
    inputs are handled by projecting onto independent coordinates of their
    affine hull.
    """
    pts = _as_fraction_points(points)
    d = len(pts[0])
    if d > max_dim:
        raise GeometryError(f"dimension {d} exceeds the configured cap {max_dim}")
    den = 1
    for p in pts:
        for x in p:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ipts = sorted({tuple(int(x * den) for x in p) for p in pts})
    verts, ineqs, simplices, k = _hull_int(ipts)
    fverts = tuple(sorted(tuple(Fraction(x, den) for x in v) for v in verts))
    facets = tuple(sorted({_canonical_ineq(a, Fraction(b, den)) for a, b in ineqs}))
    fsimp = tuple(tuple(tuple(Fraction(x, den) for x in v) for v in s) for s in simplices)
    return Polytope(fverts, facets, d, k, fsimp)


def _hull_int(ipts: list[tuple[int, ...]]):
    """Hull of integer points: (vertices, inequalities (a, b), simplices, affine dim)."""
    d = len(ipts[0])
    p0 = ipts[0]
    if d == 0:
        return [()], [], [], 0
    diffs = [[Fraction(x - y) for x, y in zip(p, p0)] for p in ipts[1:]]
    red, pivots = rref(diffs) if diffs else ([], [])
    k = len(pivots)
    if k == 0:
        eqs = [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
        ineqs = [(e, p0[i]) for i, e in enumerate(eqs)] + [(tuple(-x for x in e), -p0[i]) for i, e in enumerate(eqs)]
        return [p0], ineqs, [], 0
    if k < d:
        # project onto pivot coordinates (injective on the affine hull)
        proj = {}
        for p in ipts:
            proj.setdefault(tuple(p[c] for c in pivots), p)
        sub_verts, sub_ineqs, _, _ = _hull_int(sorted(proj))
        verts = [proj[v] for v in sub_verts]
        ineqs = []
        for a, b in sub_ineqs:
            full = [0] * d
            for c, x in zip(pivots, a):
                full[c] = x
            ineqs.append((tuple(full), b))
        for n in nullspace(diffs, d):
            b = _dot(n, p0)
            ineqs.append((n, b))
            ineqs.append((tuple(-x for x in n), -b))
        return verts, ineqs, [], k
    if d == 1:
        lo, hi = ipts[0], ipts[-1]
        return [lo, hi], [((-1,), -lo[0]), ((1,), hi[0])], [(lo,), (hi,)], 1
    if d == 2:
        return _hull_2d(ipts)
    cand = _column_extremes(ipts)
    # pick an initial simplex greedily
    simplex = [0]
    basis_rows: list[list[Fraction]] = []
    for i in range(1, len(cand)):
        row = [Fraction(x - y) for x, y in zip(cand[i], cand[0])]
        trial, piv = rref(basis_rows + [row])
        if len(piv) > len(basis_rows):
            basis_rows = trial
            simplex.append(i)
            if len(simplex) == d + 1:
                break
    facets = _full_dim_hull(cand, simplex)
    planes: dict = {}
    for idx, a, b in facets:
        key = _primitive(list(a) + [b])
        planes.setdefault(key, set()).update(idx)
    ineqs = [(key[:-1], key[-1]) for key in planes]
    used = set()
    for s in planes.values():
        used |= s
    verts = []
    for i in used:
        tight = [list(map(Fraction, key[:-1])) for key, s in planes.items() if i in s]
        if len(rref(tight)[1]) == d:
            verts.append(cand[i])
    simplices = [tuple(cand[i] for i in idx) for idx, _, _ in facets]
    return verts, ineqs, simplices, d


def _hull_2d(ipts):
    pts = sorted(set(ipts))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    ring = lower[:-1] + upper[:-1]  # counter-clockwise
    ineqs = []
    simplices = []
    for i in range(len(ring)):
        p, q = ring[i], ring[(i + 1) % len(ring)]
        a = (q[1] - p[1], p[0] - q[0])  # outward for ccw order
        ineqs.append((a, a[0] * p[0] + a[1] * p[1]))
        simplices.append((p, q))
    return ring, ineqs, simplices, 2


# ---------------------------------------------------------------------------
# volume


def volume(p: Polytope) -> Fraction:
    """Exact Euclidean volume by recursive facet pyramids; 0 if not full-dimensional."""
    if p.affine_dim < p.dim:
        return Fraction(0)
    return _pyramid_volume(list(p.vertices), p.facets)


def _pyramid_volume(vertices, facets) -> Fraction:
    d = len(vertices[0])
    if d == 1:
        xs = [v[0] for v in vertices]
        return max(xs) - min(xs)
    apex = vertices[0]
    total = Fraction(0)
    for a, b in facets:
        h = b - _dot(a, apex)
        if h == 0:
            continue
        on = [v for v in vertices if _dot(a, v) == b]
        j = max(range(d), key=lambda t: abs(a[t]))
        proj = [v[:j] + v[j + 1:] for v in on]
        sub = hull(proj)
        total += h / abs(a[j]) * _pyramid_volume(list(sub.vertices), sub.facets)
    return total / d


def triangulation_volume(p: Polytope) -> Fraction:
    """Volume from the boundary triangulation coned to the centroid (second route)."""
    if p.affine_dim < p.dim:
        return Fraction(0)
    d = p.dim
    n = len(p.vertices)
    c = [sum(v[j] for v in p.vertices) / n for j in range(d)]
    total = Fraction(0)
    for simplex in p.simplices:
        rows = [[v[j] - c[j] for j in range(d)] for v in simplex]
        den = 1
        for r in rows:
            for x in r:
                den = den * x.denominator // math.gcd(den, x.denominator)
        total += Fraction(abs(_det_int([[int(x * den) for x in r] for r in rows])), den ** d)
    return total / math.factorial(d)


def polytope_sum(a: Polytope, b: Polytope) -> Polytope:
    """Minkowski sum of two polytopes."""
    return hull([tuple(x + y for x, y in zip(u, v)) for u in a.vertices for v in b.vertices])


def from_inequalities(normals: Sequence[Sequence], rhs: Sequence) -> Polytope:
    """Bounded polyhedron {x : normal . x <= rhs} by brute-force vertex enumeration.

    Raises EmptyFiber if the system is infeasible.
    """
    rows = [tuple(Fraction(x) for x in a) for a in normals]
    rhs = [Fraction(b) for b in rhs]
    d = len(rows[0])
    if d == 0:
        if all(b >= 0 for b in rhs):
            return hull([()])
        raise EmptyFiber("infeasible system")
    uniq = sorted({_canonical_ineq(a, b) for a, b in zip(rows, rhs) if any(a)})
    for a, b in zip(rows, rhs):
        if not any(a) and b < 0:
            raise EmptyFiber("infeasible system")
    verts = set()
    for combo in itertools.combinations(uniq, d):
        x = solve([a for a, _ in combo], [b for _, b in combo])
        if x is None:
            continue
        if all(_dot(a, x) <= b for a, b in uniq):
            verts.add(tuple(x))
    if not verts:
        # a point polytope may come from fewer independent tight constraints only
        # when the system is degenerate; anything else is empty or unbounded
        raise EmptyFiber("no vertices: empty (or unbounded) system")
    return hull(verts)


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class PolyCone:
    """Pointed rational cone in double description.

    ``halfspaces`` are primitive integer normals h with h . x >= 0 on the cone
    (equalities appear as opposite pairs).
    """

    rays: tuple[tuple[int, ...], ...]
    halfspaces: tuple[tuple[int, ...], ...]
    dim: int

    def contains(self, x) -> bool:
        return all(_dot(h, x) >= 0 for h in self.halfspaces)

    def in_interior(self, x) -> bool:
        if self.cone_dim < self.dim:
            return False
        return all(_dot(h, x) > 0 for h in self.halfspaces)

    @property
    def cone_dim(self) -> int:
        if not self.rays:
            return 0
        return len(rref([list(map(Fraction, r)) for r in self.rays])[1])

    @property
    def has_interior(self) -> bool:
        return self.cone_dim == self.dim


def cone_from_generators(points: Iterable[Sequence[int]]) -> PolyCone:
    """Cone spanned by nonnegative integer generators."""
    gens = [tuple(int(x) for x in p) for p in points]
    if not gens:
        raise GeometryError("cone_from_generators: no generators")
    n = len(gens[0])
    for g in gens:
        if len(g) != n:
            raise GeometryError("cone_from_generators: dimension mismatch")
        if any(x < 0 for x in g):
            raise GeometryError(f"generator {g} has a negative entry; semigroup generators lie in N^{n}")
    dirs = sorted({_primitive(g) for g in gens if any(g)})
    if not dirs:
        eq = []
        for i in range(n):
            e = tuple(1 if j == i else 0 for j in range(n))
            eq += [e, tuple(-x for x in e)]
        return PolyCone((), tuple(eq), n)
    # every direction is nonzero and nonnegative: scale to the level set sum = 1
    level = [tuple(Fraction(x, sum(g)) for x in g) for g in dirs]
    section = hull(level)
    extreme = sorted({_primitive([int(x * _lcm_den(v)) for x in v]) for v in section.vertices})
    full = hull([tuple([0] * n)] + [tuple(r) for r in extreme])
    halfspaces = []
    for a, b in full.integer_facets():
        if b == 0:
            halfspaces.append(tuple(-int(x) for x in a))
    return PolyCone(tuple(extreme), tuple(sorted(set(halfspaces))), n)


def _lcm_den(v) -> int:
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    return den


def cone_fiber(c: PolyCone, a: Sequence) -> Polytope:
    """The polytope {x in R^d : (x, a) in c}, where a has the trailing coordinates."""
    a = [Fraction(x) for x in a]
    r = len(a)
    d = c.dim - r
    if d < 0:
        raise GeometryError("fiber coordinates exceed cone dimension")
    normals = []
    rhs = []
    for h in c.halfspaces:
        hx, ha = h[:d], h[d:]
        # hx . x + ha . a >= 0  <=>  -hx . x <= ha . a
        normals.append(tuple(-x for x in hx))
        rhs.append(_dot(ha, a))
    return from_inequalities(normals, rhs)
