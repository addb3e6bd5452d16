"""Exact polytopes in dimension <= 4: hulls, Minkowski sums, volumes, mixed volumes, permanents."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from ._exact import rank, row_echelon, sub, vec

MAX_DIM = 4
MAX_PERMANENT_ORDER = 12

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class Polytope:
    """Convex hull of finitely many rational points; ``vertices`` is canonical
    (extreme points only, sorted)."""

    dim: int
    vertices: tuple[Point, ...]

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def affine_dim(self) -> int:
        if not self.vertices:
            return -1
        v0 = self.vertices[0]
        return rank([sub(v, v0) for v in self.vertices[1:]]) if len(self.vertices) > 1 else 0

    def volume(self) -> Fraction:
        return volume(self)

    def translate(self, t) -> "Polytope":
        t = vec(t)
        return Polytope(self.dim, tuple(sorted(tuple(a + b for a, b in zip(v, t)) for v in self.vertices)))

    def scale(self, c) -> "Polytope":
        c = Fraction(c)
        if c < 0:
            raise ValueError("negative scaling")
        if c == 0:
            return convex_hull([(0,) * self.dim]) if self.vertices else self
        return Polytope(self.dim, tuple(sorted(tuple(c * x for x in v) for v in self.vertices)))

    def __add__(self, other: "Polytope") -> "Polytope":
        return minkowski_sum(self, other)

    def to_json(self) -> list:
        return [[str(x) for x in v] for v in self.vertices]


def _project_coords(directions: list[Point]) -> list[int]:
    """Coordinates on which projection is injective on the affine hull."""
    # pivot columns of the direction matrix are independent coordinates
    _, pivots = row_echelon(directions)
    return pivots


def _integerize(pts: list[Point]) -> tuple[list[tuple[int, ...]], int]:
    """Scale rational points to integer points; returns (points, scale)."""
    scale = math.lcm(*(x.denominator for p in pts for x in p)) if pts else 1
    return [tuple(int(x * scale) for x in p) for p in pts], scale


def _hull_indices(pts: list[Point]) -> list[int]:
    """Indices of the extreme points."""
    n = len(pts)
    d = len(pts[0])
    if n == 1:
        return [0]
    ipts, _ = _integerize(pts)
    p0 = ipts[0]
    dirs = [sub(p, p0) for p in ipts[1:]]
    k = _irank(dirs)
    if k == 0:
        return [0]
    if k < d:
        coords = _project_coords(dirs)
        return _hull_indices([tuple(p[c] for c in coords) for p in pts])
    if d == 1:
        lo = min(range(n), key=lambda i: pts[i][0])
        hi = max(range(n), key=lambda i: pts[i][0])
        return sorted({lo, hi})
    return _beneath_beyond(ipts)[0]


def _idet(m: list[list[int]]) -> int:
    """Integer determinant by cofactor expansion (order <= 4)."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            total += (-1) ** j * m[0][j] * _idet(minor)
    return total


def _irank(rows) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows if any(r)]
    rk = 0
    while m:
        piv = m.pop()
        c = next(j for j, x in enumerate(piv) if x)
        a = piv[c]
        rk += 1
        nxt = []
        for r in m:
            if r[c]:
                b = r[c]
                r = [a * x - b * y for x, y in zip(r, piv)]
            if any(r):
                nxt.append(r)
        m = nxt
    return rk


def _facet_plane(pts, idx: tuple[int, ...], interior_sum, weight: int):
    """Integer outward normal and offset of the hyperplane through pts[idx],
    oriented so that the interior point interior_sum / weight is beneath it."""
    base = pts[idx[0]]
    rows = [[a - b for a, b in zip(pts[i], base)] for i in idx[1:]]
    d = len(base)
    # generalized cross product of the d-1 edge vectors
    normal = tuple((-1) ** j * _idet([r[:j] + r[j + 1 :] for r in rows]) for j in range(d))
    if not any(normal):
        raise RuntimeError("degenerate facet")
    off = sum(a * b for a, b in zip(normal, base))
    if sum(a * b for a, b in zip(normal, interior_sum)) > weight * off:
        normal = tuple(-x for x in normal)
        off = -off
    return normal, off


def _beneath_beyond(pts: list[tuple[int, ...]]):
    """Incremental hull of a full-dimensional integer point set.

    Returns (extreme indices, triangulated boundary as (index tuple, outward
    normal, offset) triples, (interior_sum, weight)) where the interior point
    is interior_sum / weight.  Points coplanar with a facet are treated as
    not visible, so the boundary may use non-extreme points as triangulation
    vertices; extremality is decided afterwards by the rank of the facet
    normals through each point.
    """
    d = len(pts[0])
    n = len(pts)
    simplex = [0]
    for i in range(1, n):
        cand = simplex + [i]
        if _irank([sub(pts[j], pts[cand[0]]) for j in cand[1:]]) == len(cand) - 1:
            simplex = cand
            if len(simplex) == d + 1:
                break
    interior_sum = tuple(sum(pts[i][c] for i in simplex) for c in range(d))
    weight = d + 1
    facets = []
    for omit in simplex:
        idx = tuple(i for i in simplex if i != omit)
        normal, off = _facet_plane(pts, idx, interior_sum, weight)
        facets.append((idx, normal, off))
    in_simplex = set(simplex)
    for q in range(n):
        if q in in_simplex:
            continue
        pq = pts[q]
        visible = [f for f in facets if sum(a * b for a, b in zip(f[1], pq)) > f[2]]
        if not visible:
            continue
        ridge_count: dict[tuple[int, ...], int] = {}
        for idx, _, _ in visible:
            for r in itertools.combinations(sorted(idx), d - 1):
                ridge_count[r] = ridge_count.get(r, 0) + 1
        vis_ids = {id(f) for f in visible}
        facets = [f for f in facets if id(f) not in vis_ids]
        for ridge, c in ridge_count.items():
            if c == 1:
                idx = ridge + (q,)
                normal, off = _facet_plane(pts, idx, interior_sum, weight)
                facets.append((idx, normal, off))
    normals_at: dict[int, list] = {}
    for idx, normal, _ in facets:
        for i in idx:
            normals_at.setdefault(i, []).append(normal)
    verts = sorted(i for i, ns in normals_at.items() if _irank(ns) == d)
    return verts, facets, (interior_sum, weight)


def convex_hull(points: Sequence[Sequence], dim: int | None = None) -> Polytope:
    """Canonical hull of rational points in dimension <= 4.

    >>> convex_hull([(0, 0), (1, 0), (0, 1), (Fraction(1, 4), Fraction(1, 4))]).vertices
    ((Fraction(0, 1), Fraction(0, 1)), (Fraction(0, 1), Fraction(1, 1)), (Fraction(1, 1), Fraction(0, 1)))
    """
    pts = sorted({vec(p) for p in points})
    if not pts:
        if dim is None:
            raise ValueError("dimension of an empty polytope must be given")
        return Polytope(dim, ())
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise ValueError("points of mixed dimension")
    d = dims.pop()
    if dim is not None and dim != d:
        raise ValueError(f"points have dimension {d}, expected {dim}")
    if d > MAX_DIM:
        raise ValueError(f"dimension {d} exceeds the supported maximum {MAX_DIM}")
    if d == 0:
        return Polytope(0, (pts[0],))
    idx = _hull_indices(pts)
    return Polytope(d, tuple(sorted(pts[i] for i in idx)))


def minkowski_sum(a: Polytope, b: Polytope) -> Polytope:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    if a.is_empty or b.is_empty:
        return Polytope(a.dim, ())
    return convex_hull([tuple(x + y for x, y in zip(u, v)) for u in a.vertices for v in b.vertices], a.dim)


def volume(p: Polytope) -> Fraction:
    """Euclidean d-volume; 0 for lower-dimensional polytopes."""
    d = p.dim
    if len(p.vertices) <= d:
        return Fraction(0)
    pts = list(p.vertices)
    if rank([sub(v, pts[0]) for v in pts[1:]]) < d:
        return Fraction(0)
    if d == 1:
        return pts[-1][0] - pts[0][0]
    ipts, scale = _integerize(pts)
    _, facets, (c, wgt) = _beneath_beyond(ipts)
    total = 0
    for idx, _, _ in facets:
        total += abs(_idet([[wgt * x - y for x, y in zip(ipts[i], c)] for i in idx]))
    return Fraction(total, math.factorial(d) * wgt**d * scale**d)


def mixed_volume(*polytopes: Polytope) -> Fraction:
    """Coefficient of lambda_1...lambda_d in vol(lambda_1 Q_1 + ... + lambda_d Q_d),
    computed as sum over nonempty S of (-1)^(d-|S|) vol(sum_{i in S} Q_i).

    >>> delta = convex_hull([(0, 0), (1, 0), (0, 1)])
    >>> mixed_volume(delta, delta)
    Fraction(1, 1)
    """
    if len(polytopes) == 1 and not isinstance(polytopes[0], Polytope):
        polytopes = tuple(polytopes[0])
    d = len(polytopes)
    if d == 0:
        raise ValueError("need at least one polytope")
    if any(q.dim != d for q in polytopes):
        raise ValueError("mixed volume needs exactly d polytopes in dimension d")
    if any(q.is_empty for q in polytopes):
        return Fraction(0)
    if d == 1:
        return volume(polytopes[0])
    total = Fraction(0)
    sums: dict[tuple[int, ...], Polytope] = {}
    for size in range(1, d + 1):
        for subset in itertools.combinations(range(d), size):
            if size == 1:
                s = polytopes[subset[0]]
            else:
                s = minkowski_sum(sums[subset[:-1]], polytopes[subset[-1]])
            sums[subset] = s
            sign = -1 if (d - size) % 2 else 1
            total += sign * volume(s)
    return total


def _as_matrix(a) -> list[list[Fraction]]:
    m = [list(vec(r)) for r in a]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix is not square")
    return m


def permanent(a) -> Fraction:
    """Ryser's inclusion-exclusion formula, exact.

    >>> permanent([[1, 2], [3, 4]])
    Fraction(10, 1)
    """
    m = _as_matrix(a)
    n = len(m)
    if n == 0:
        return Fraction(1)
    if n > MAX_PERMANENT_ORDER:
        raise ValueError(f"order {n} exceeds the supported maximum {MAX_PERMANENT_ORDER}")
    total = Fraction(0)
    # Gray-code walk over column subsets keeps row sums incremental
    row_sums = [Fraction(0)] * n
    prev_gray = 0
    for step in range(1, 2**n):
        gray = step ^ (step >> 1)
        changed = (gray ^ prev_gray).bit_length() - 1
        sgn = 1 if gray & (1 << changed) else -1
        for i in range(n):
            row_sums[i] += sgn * m[i][changed]
        prev_gray = gray
        prod = Fraction(1)
        for s in row_sums:
            prod *= s
            if prod == 0:
                break
        if (n - bin(gray).count("1")) % 2:
            total -= prod
        else:
            total += prod
    return total


def axis_simplex(row: Sequence) -> Polytope:
    """conv(0, a_1 e_1, ..., a_d e_d)."""
    d = len(row)
    pts = [(0,) * d] + [tuple(row[j] if i == j else 0 for i in range(d)) for j in range(d)]
    return convex_hull(pts)


class AxisSimplexMV(NamedTuple):
    per_over_dfact: Fraction
    exact_mv: Fraction
    agree: bool


def axis_simplex_mv(a) -> AxisSimplexMV:
    """Per(A)/d! next to the exact mixed volume of the row axis-simplices.

    The two agree when the rows are proportional; in general they need not
    (e.g. [[2, 1], [1, 2]] gives 5/2 against 4), so both are reported.
    """
    m = _as_matrix(a)
    d = len(m)
    if d == 0 or d > MAX_DIM:
        raise ValueError(f"order must be between 1 and {MAX_DIM}")
    if any(x <= 0 for r in m for x in r):
        raise ValueError("entries must be positive")
    per = permanent(m) / math.factorial(d)
    exact = mixed_volume(*[axis_simplex(r) for r in m])
    return AxisSimplexMV(per, exact, per == exact)
