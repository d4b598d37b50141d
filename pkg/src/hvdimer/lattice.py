"""Exact lattice polygons, primitive boundary segments and outward normals.

Everything here is integer arithmetic.  Polygons are stored counterclockwise
with the lexicographically smallest vertex first.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cmp_to_key
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    DegenerateInput,
    NonConvex,
    NotATriangle,
    NotClosed,
    TooFewDirections,
    ValidationError,
)

Point = tuple[int, int]


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def rot90(v):
    """Rotate an integer vector by 90 degrees counterclockwise."""
    return (-v[1], v[0])


def rot270(v):
    return (v[1], -v[0])


def is_primitive(v) -> bool:
    return gcd(abs(v[0]), abs(v[1])) == 1


def primitive_part(v):
    g = gcd(abs(v[0]), abs(v[1]))
    if g == 0:
        raise DegenerateInput("zero vector has no primitive part")
    return (v[0] // g, v[1] // g), g


def ext_gcd(a: int, b: int):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _half(v):
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(u, v):
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


angle_key = cmp_to_key(_angle_cmp)
"""Sort key ordering nonzero integer vectors by angle in [0, 2*pi)."""


@dataclass(frozen=True)
class PrimitiveVector:
    a: int
    b: int

    def __post_init__(self):
        if not is_primitive((self.a, self.b)):
            raise ValidationError(f"({self.a}, {self.b}) is not primitive")

    def __iter__(self):
        return iter((self.a, self.b))

    def tuple(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class LatticePolygon:
    """Strictly convex lattice polygon; build with :func:`validate_polygon`."""

    vertices: tuple[Point, ...]

    def __len__(self):
        return len(self.vertices)

    @property
    def doubled_area(self) -> int:
        vs = self.vertices
        return sum(cross(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    def sides(self):
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def to_json(self):
        return {"vertices": [list(v) for v in self.vertices]}


@dataclass(frozen=True)
class BoundarySegment:
    start: Point
    end: Point
    normal: PrimitiveVector

    @property
    def direction(self):
        return (self.end[0] - self.start[0], self.end[1] - self.start[1])


@dataclass(frozen=True)
class NormalMultiset:
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(tuple(e) for e in self.entries)))

    def total(self):
        return (sum(e[0] for e in self.entries), sum(e[1] for e in self.entries))

    def counter(self):
        return Counter(self.entries)


@dataclass(frozen=True)
class GroupMatrix:
    """Integer matrix P = [[p, r], [q, s]] with positive determinant."""

    p: int
    q: int
    r: int
    s: int

    @classmethod
    def from_rows(cls, rows):
        (p, r), (q, s) = rows
        return cls(int(p), int(q), int(r), int(s))

    @property
    def det(self) -> int:
        return self.p * self.s - self.q * self.r

    def rows(self):
        return [[self.p, self.r], [self.q, self.s]]

    def transpose_columns(self):
        """Columns of the transpose: generators of the lattice P^T Z^2."""
        return [(self.p, self.r), (self.q, self.s)]


def validate_polygon(vertices: Sequence[Sequence[int]]) -> LatticePolygon:
    vs = [(int(v[0]), int(v[1])) for v in vertices]
    if len(vs) < 3:
        raise DegenerateInput("a polygon needs at least 3 vertices")
    if len(set(vs)) != len(vs):
        raise DegenerateInput("repeated vertex")
    area2 = sum(cross(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))
    if area2 == 0:
        raise DegenerateInput("zero area")
    if area2 < 0:
        vs.reverse()
    n = len(vs)
    for i in range(n):
        a, b, c = vs[i - 1], vs[i], vs[(i + 1) % n]
        if cross((b[0] - a[0], b[1] - a[1]), (c[0] - b[0], c[1] - b[1])) <= 0:
            raise NonConvex(f"vertex {b} is not a strictly convex corner")
    k = vs.index(min(vs))
    return LatticePolygon(tuple(vs[k:] + vs[:k]))


def boundary_segments(p: LatticePolygon) -> list[BoundarySegment]:
    out = []
    for a, b in p.sides():
        (dx, dy), g = primitive_part((b[0] - a[0], b[1] - a[1]))
        for k in range(g):
            s = (a[0] + k * dx, a[1] + k * dy)
            out.append(BoundarySegment(s, (s[0] + dx, s[1] + dy), PrimitiveVector(dy, -dx)))
    return out


def boundary_lattice_points(p: LatticePolygon) -> set[Point]:
    """Boundary lattice points by direct enumeration along each side."""
    pts = set()
    for a, b in p.sides():
        lo_x, hi_x = sorted((a[0], b[0]))
        lo_y, hi_y = sorted((a[1], b[1]))
        for x in range(lo_x, hi_x + 1):
            for y in range(lo_y, hi_y + 1):
                if cross((b[0] - a[0], b[1] - a[1]), (x - a[0], y - a[1])) == 0:
                    pts.add((x, y))
    return pts


def normal_multiset(p: LatticePolygon) -> NormalMultiset:
    return NormalMultiset(tuple(seg.normal.tuple() for seg in boundary_segments(p)))


def polygon_from_normals(n: NormalMultiset | Iterable) -> LatticePolygon:
    entries = n.entries if isinstance(n, NormalMultiset) else tuple(tuple(e) for e in n)
    if (sum(e[0] for e in entries), sum(e[1] for e in entries)) != (0, 0):
        raise NotClosed("normals do not sum to zero")
    edges = sorted((rot90(e) for e in entries), key=angle_key)
    sides = []
    for e in edges:
        if sides and _angle_cmp(sides[-1], e) == 0:
            sides[-1] = (sides[-1][0] + e[0], sides[-1][1] + e[1])
        else:
            sides.append(e)
    if len(sides) < 3:
        raise TooFewDirections("need at least three distinct directions")
    pts = [(0, 0)]
    for e in sides[:-1]:
        pts.append((pts[-1][0] + e[0], pts[-1][1] + e[1]))
    return normalize_translation(validate_polygon(pts))


def normalize_translation(p: LatticePolygon) -> LatticePolygon:
    lo = min(p.vertices)
    return LatticePolygon(tuple((v[0] - lo[0], v[1] - lo[1]) for v in p.vertices))


def convex_hull(points: Iterable[Sequence[int]]) -> list[Point]:
    """Strict convex hull (counterclockwise, collinear points dropped)."""
    pts = sorted({(int(x), int(y)) for x, y in points})
    if len(pts) <= 2:
        return pts

    def half(seq):
        h = []
        for q in seq:
            while len(h) >= 2 and cross(
                (h[-1][0] - h[-2][0], h[-1][1] - h[-2][1]), (q[0] - h[-1][0], q[1] - h[-1][1])
            ) <= 0:
                h.pop()
            h.append(q)
        return h

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


def hull_polygon(points) -> LatticePolygon:
    hull = convex_hull(points)
    if len(hull) < 3:
        raise DegenerateInput(f"point set spans no 2D polygon: {hull}")
    return validate_polygon(hull)


def triangle_to_matrix(t: LatticePolygon) -> GroupMatrix:
    if len(t.vertices) != 3:
        raise NotATriangle(f"expected 3 vertices, got {len(t.vertices)}")
    # vertices are counterclockwise, so (v1 - v0, v2 - v0) has positive determinant
    v0, v1, v2 = t.vertices
    p, q = v1[0] - v0[0], v1[1] - v0[1]
    r, s = v2[0] - v0[0], v2[1] - v0[1]
    return GroupMatrix(p, q, r, s)


# -- lattices in Z^2 -----------------------------------------------------------


class Lattice2:
    """Sublattice of Z^2 spanned by integer generators (rank 0, 1 or 2).

    ``reduce`` maps a vector to a canonical coset representative.
    """

    def __init__(self, gens):
        gens = [(int(g[0]), int(g[1])) for g in gens if tuple(g) != (0, 0)]
        self.rank = 0
        if not gens:
            return
        # Hermite-style reduction: row "b" = (k, d2) with d2 = gcd of y-coordinates
        d2, k = 0, 0
        xs_kernel = []
        vec = None
        for g in gens:
            if vec is None:
                vec = g
                continue
            vec, extra = _combine(vec, g)
            if extra != (0, 0):
                xs_kernel.append(extra)
        # vec has y-coordinate equal to the gcd of all y-coordinates (or is the
        # unique surviving direction); extras have y = 0
        d1 = 0
        for e in xs_kernel:
            d1 = gcd(d1, abs(e[0]))
        if vec[1] != 0:
            if vec[1] < 0:
                vec = (-vec[0], -vec[1])
            d2, k = vec[1], vec[0]
            if d1:
                self.rank = 2
                self.d1, self.d2, self.k = d1, d2, k % d1
                return
            self.rank = 1
            self.g = vec
        else:
            d1 = gcd(d1, abs(vec[0]))
            self.rank = 1
            self.g = (d1, 0)
        # rank one: g = c * g0 with g0 primitive; complete g0 to a basis
        (a, b), c = primitive_part(self.g)
        _, x, y = ext_gcd(a, b)
        # basis (g0, h) with det [[a, -y], [b, x]] = a x + b y = 1
        self.c, self.g0, self.h = c, (a, b), (-y, x)

    @property
    def index(self):
        return self.d1 * self.d2 if self.rank == 2 else None

    def reduce(self, v):
        v = (int(v[0]), int(v[1]))
        if self.rank == 0:
            return v
        if self.rank == 2:
            t = v[1] // self.d2
            x, y = v[0] - t * self.k, v[1] - t * self.d2
            return (x % self.d1, y)
        # coordinates in basis (g0, h): v = alpha g0 + beta h
        a, b = self.g0
        hx, hy = self.h
        alpha = v[0] * hy - v[1] * hx
        beta = a * v[1] - b * v[0]
        alpha %= self.c
        return (alpha * a + beta * hx, alpha * b + beta * hy)

    def residues(self):
        """Canonical residue box (rank 2 only), ordered row by row."""
        if self.rank != 2:
            raise ValidationError("residues need a full-rank lattice")
        return [(i, j) for j in range(self.d2) for i in range(self.d1)]


def _combine(u, v):
    """Unimodular row reduction of two vectors on their y-coordinate.

    Returns (w, e) spanning the same lattice with e[1] == 0.
    """
    if u[1] == 0 and v[1] == 0:
        g = gcd(abs(u[0]), abs(v[0]))
        return (g, 0), (0, 0)
    if u[1] == 0:
        u, v = v, u
    g, x, y = ext_gcd(u[1], v[1])
    w = (x * u[0] + y * v[0], g)
    e = ((v[1] // g) * u[0] - (u[1] // g) * v[0], 0)
    return w, e
