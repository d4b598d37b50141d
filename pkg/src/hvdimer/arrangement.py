"""Oriented line arrangements on the torus R^2/Z^2 as exact half-edge complexes.

A line with primitive slope (a, b) and offset c is the point set
``b*x - a*y = c (mod 1)`` oriented by (a, b).  All coordinates are
``Fraction`` values reduced into [0, 1).
"""
from __future__ import annotations

import itertools
import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .errors import (
    CoincidentParallels,
    IsolatedLine,
    NotAdmissible,
    TriplePoint,
    Unsaturated,
    ValidationError,
)
from .lattice import (
    LatticePolygon,
    boundary_segments,
    cross,
    ext_gcd,
    is_primitive,
    rot90,
)

WHITE, BLACK, UNCOLORED = "white", "black", "uncolored"

# Quarter turns applied to a boundary segment's outward normal to get the slope
# of its line.  Zero: the line runs along the normal itself, which is the
# convention under which the characteristic polygon of the output reproduces
# the input (guarded by the polygon round-trip tests on asymmetric polygons).
LINE_QUARTER_TURNS = 0


def frac_mod1(x) -> Fraction:
    x = Fraction(x)
    return x - math.floor(x)


@dataclass(frozen=True)
class TorusLine:
    slope: tuple[int, int]
    offset: Fraction

    def __post_init__(self):
        slope = (int(self.slope[0]), int(self.slope[1]))
        if not is_primitive(slope):
            raise ValidationError(f"slope {slope} is not primitive")
        object.__setattr__(self, "slope", slope)
        object.__setattr__(self, "offset", frac_mod1(self.offset))

    @property
    def _uv(self):
        a, b = self.slope
        g, u, v = ext_gcd(b, -a)
        assert g == 1
        return u, v  # b*u - a*v = 1

    def base_point(self):
        u, v = self._uv
        return (self.offset * u, self.offset * v)

    def value(self, pt):
        """Residue of ``b*x - a*y - c`` mod 1; zero exactly on the line."""
        a, b = self.slope
        return frac_mod1(b * Fraction(pt[0]) - a * Fraction(pt[1]) - self.offset)

    def point_at(self, t):
        p0 = self.base_point()
        a, b = self.slope
        return (frac_mod1(p0[0] + t * a), frac_mod1(p0[1] + t * b))

    def param(self, pt) -> Fraction:
        """Parameter t in [0, 1) of a point on the line."""
        u, v = self._uv
        p0 = self.base_point()
        return frac_mod1(-v * (Fraction(pt[0]) - p0[0]) + u * (Fraction(pt[1]) - p0[1]))

    def same_support(self, other: "TorusLine") -> bool:
        if self.slope == other.slope:
            return self.offset == other.offset
        if self.slope == (-other.slope[0], -other.slope[1]):
            return self.offset == frac_mod1(-other.offset)
        return False

    def to_json(self):
        return {"slope": list(self.slope), "offset": str(self.offset)}


@dataclass(frozen=True)
class OrientedArrangement:
    lines: tuple[TorusLine, ...]
    # metadata: outward normal of the polygon side each line came from
    normals: Optional[tuple[tuple[int, int], ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))

    def to_json(self):
        out = {"lines": [ln.to_json() for ln in self.lines]}
        if self.normals is not None:
            for d, n in zip(out["lines"], self.normals):
                d["normal"] = list(n)
        return out

    @classmethod
    def from_json(cls, data):
        lines = [TorusLine(tuple(d["slope"]), Fraction(d["offset"])) for d in data["lines"]]
        return cls(tuple(lines))


def line_intersections(l1: TorusLine, l2: TorusLine) -> list[tuple[Fraction, Fraction]]:
    if l1.same_support(l2):
        raise CoincidentParallels(f"{l1} and {l2} are the same unoriented line")
    d = cross(l1.slope, l2.slope)
    if d == 0:
        return []
    # t*d = c2 - f2(p0) (mod 1) along l1
    p0 = l1.base_point()
    rhs = l2.offset - (l2.slope[1] * p0[0] - l2.slope[0] * p0[1])
    ts = sorted({frac_mod1((rhs + j) / d) for j in range(abs(d))})
    return [l1.point_at(t) for t in ts]


@dataclass
class HalfEdge:
    line: int
    forward: bool
    origin: int
    twin: int
    next: int = -1
    cell: int = -1
    vec: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))
    edge: int = -1


@dataclass
class ArrangementComplex:
    """Half-edge cell complex of a simple oriented arrangement.

    ``corner_lift[h]`` is the integer vector taking the canonical position of
    ``origin(h)`` to its position in the lifted polygon of ``cell(h)``.
    """

    arrangement: OrientedArrangement
    vertices: list[tuple[Fraction, Fraction]]
    vertex_lines: list[tuple[int, int]]
    line_vertices: list[list[int]]
    half_edges: list[HalfEdge]
    cells: list[list[int]]
    corner_lift: list[tuple[int, int]]
    colors: Optional[list[str]] = None

    @property
    def num_edges(self):
        return len(self.half_edges) // 2

    def euler(self):
        return len(self.vertices) - self.num_edges + len(self.cells)

    def cell_lift(self, ci):
        """Lifted polygon (list of exact points) of cell ``ci``."""
        pts = []
        for h in self.cells[ci]:
            v = self.vertices[self.half_edges[h].origin]
            k = self.corner_lift[h]
            pts.append((v[0] + k[0], v[1] + k[1]))
        return pts

    def centroid(self, ci):
        pts = self.cell_lift(ci)
        a2 = cx = cy = Fraction(0)
        for i in range(len(pts)):
            p, q = pts[i], pts[(i + 1) % len(pts)]
            w = p[0] * q[1] - q[0] * p[1]
            a2 += w
            cx += (p[0] + q[0]) * w
            cy += (p[1] + q[1]) * w
        return (cx / (3 * a2), cy / (3 * a2))

    def to_json(self):
        return {
            "arrangement": self.arrangement.to_json(),
            "vertices": [[str(x), str(y)] for x, y in self.vertices],
            "half_edges": [
                {
                    "line": h.line,
                    "forward": h.forward,
                    "origin": h.origin,
                    "twin": h.twin,
                    "next": h.next,
                    "cell": h.cell,
                }
                for h in self.half_edges
            ],
            "cells": self.cells,
            "colors": self.colors,
        }


def _ccw_directions(m1, m2):
    """Cyclic counterclockwise order of (line index, sign) at a crossing."""
    if cross(m1, m2) > 0:
        return [(0, 1), (1, 1), (0, -1), (1, -1)]
    return [(0, 1), (1, -1), (0, -1), (1, 1)]


def build_complex(a: OrientedArrangement) -> ArrangementComplex:
    lines = a.lines
    n = len(lines)
    point_lines: dict[tuple, set] = defaultdict(set)
    for i, j in itertools.combinations(range(n), 2):
        for pt in line_intersections(lines[i], lines[j]):
            s = point_lines[pt]
            s.update((i, j))
            if len(s) > 2:
                raise TriplePoint(f"lines {sorted(s)} meet at {pt}")
    vertices = sorted(point_lines)
    vertex_lines = [tuple(sorted(point_lines[pt])) for pt in vertices]

    line_vertices: list[list[int]] = []
    line_params: list[list[Fraction]] = []
    for li, ln in enumerate(lines):
        on = [(ln.param(vertices[v]), v) for v in range(len(vertices)) if li in vertex_lines[v]]
        if not on:
            raise IsolatedLine(f"line {li} crosses no other line")
        on.sort()
        line_params.append([t for t, _ in on])
        line_vertices.append([v for _, v in on])

    half_edges: list[HalfEdge] = []
    # outgoing[v][(line, sign)] = half-edge id leaving v along +/- slope
    outgoing: list[dict] = [dict() for _ in vertices]
    for li, ln in enumerate(lines):
        vs, ts = line_vertices[li], line_params[li]
        k = len(vs)
        m = ln.slope
        for i in range(k):
            dt = (ts[(i + 1) % k] - ts[i]) if i + 1 < k else (1 + ts[0] - ts[i])
            eid = len(half_edges) // 2
            fw = HalfEdge(li, True, vs[i], 2 * eid + 1, vec=(dt * m[0], dt * m[1]), edge=eid)
            bw = HalfEdge(li, False, vs[(i + 1) % k], 2 * eid, vec=(-dt * m[0], -dt * m[1]), edge=eid)
            half_edges += [fw, bw]
            outgoing[vs[i]][(li, 1)] = 2 * eid
            outgoing[vs[(i + 1) % k]][(li, -1)] = 2 * eid + 1

    ccw_at: list[list[int]] = []
    for v, (l1, l2) in enumerate(vertex_lines):
        order = _ccw_directions(lines[l1].slope, lines[l2].slope)
        pair = (l1, l2)
        ccw_at.append([outgoing[v][(pair[i], s)] for i, s in order])
    for hid, h in enumerate(half_edges):
        v = half_edges[h.twin].origin  # head of h
        ring = ccw_at[v]
        h.next = ring[ring.index(h.twin) - 1]

    cells: list[list[int]] = []
    for start in range(len(half_edges)):
        if half_edges[start].cell >= 0:
            continue
        cyc, h = [], start
        while half_edges[h].cell < 0:
            half_edges[h].cell = len(cells)
            cyc.append(h)
            h = half_edges[h].next
        assert h == start
        cells.append(cyc)

    corner_lift: list[tuple[int, int]] = [(0, 0)] * len(half_edges)
    for cyc in cells:
        pos = vertices[half_edges[cyc[0]].origin]
        for h in cyc:
            v = vertices[half_edges[h].origin]
            kx, ky = pos[0] - v[0], pos[1] - v[1]
            assert kx.denominator == 1 and ky.denominator == 1
            corner_lift[h] = (int(kx), int(ky))
            vec = half_edges[h].vec
            pos = (pos[0] + vec[0], pos[1] + vec[1])
        if pos != vertices[half_edges[cyc[0]].origin]:
            raise AssertionError("cell boundary does not close up in the universal cover")

    cpx = ArrangementComplex(a, vertices, vertex_lines, line_vertices, half_edges, cells, corner_lift)
    if cpx.euler() != 0:
        raise AssertionError(f"Euler characteristic {cpx.euler()} != 0")
    return cpx


def color_cells(c: ArrangementComplex) -> ArrangementComplex:
    colors = []
    for cyc in c.cells:
        fw = [c.half_edges[h].forward for h in cyc]
        colors.append(WHITE if all(fw) else BLACK if not any(fw) else UNCOLORED)
    return replace(c, colors=colors)


def is_admissible(c: ArrangementComplex):
    """Return (admissible, offending edge ids)."""
    if c.colors is None:
        c = color_cells(c)
    bad = []
    for e in range(c.num_edges):
        c1 = c.half_edges[2 * e].cell
        c2 = c.half_edges[2 * e + 1].cell
        if c.colors[c1] == UNCOLORED and c.colors[c2] == UNCOLORED:
            bad.append(e)
    return (not bad), bad


def vertex_corners(c: ArrangementComplex):
    """For each vertex, the list of (half-edge, cell) corners around it."""
    corners = [[] for _ in c.vertices]
    for hid, h in enumerate(c.half_edges):
        corners[h.origin].append((hid, h.cell))
    return corners


def signature(c: ArrangementComplex) -> bytes:
    lines = c.arrangement.lines
    if c.colors is None:
        c = color_cells(c)
    groups = defaultdict(list)
    for i, ln in enumerate(lines):
        groups[ln.slope].append(i)
    keys = sorted(groups)
    best = None
    for perm in itertools.product(*(itertools.permutations(groups[k]) for k in keys)):
        order = [i for block in perm for i in block]
        first = c.line_vertices[order[0]]
        for s in range(len(first)):
            enc = _encode(c, order, s)
            if best is None or enc < best:
                best = enc
    colors = sorted(Counter(c.colors).items())
    return repr((best, colors)).encode()


def _encode(c: ArrangementComplex, order, start):
    label: dict[int, int] = {}
    seqs: dict[int, tuple] = {}

    def walk(li, s):
        vs = c.line_vertices[li]
        rot = vs[s:] + vs[:s]
        for v in rot:
            if v not in label:
                label[v] = len(label)
        seqs[li] = tuple(label[v] for v in rot)

    walk(order[0], start)
    pending = order[1:]
    while pending:
        for li in pending:
            known = [(label[v], k) for k, v in enumerate(c.line_vertices[li]) if v in label]
            if known:
                walk(li, min(known)[1])
                pending.remove(li)
                break
        else:
            raise AssertionError("arrangement is disconnected")
    return tuple(seqs[li] for li in order)


@dataclass(frozen=True)
class EnumerationConfig:
    seed: int = 0
    grid_denominator: int = 64
    saturation_count: int = 200
    max_samples: int = 50_000

    def check(self, num_lines):
        if self.grid_denominator < 4 * num_lines**2:
            raise ValidationError(
                f"grid denominator {self.grid_denominator} < 4*{num_lines}^2"
            )
        if self.saturation_count < 50:
            raise ValidationError("saturation count must be at least 50")


@dataclass
class EnumerationResult:
    complexes: list[ArrangementComplex]
    signatures: list[bytes]
    samples: int
    simple_samples: int
    distinct_types: int
    saturated: bool
    arrangement_slopes: tuple = ()
    normals: tuple = ()


def polygon_lines(p: LatticePolygon):
    """(slope, outward normal) for each primitive boundary segment."""
    out = []
    for seg in boundary_segments(p):
        m = seg.normal.tuple()
        s = m
        for _ in range(LINE_QUARTER_TURNS % 4):
            s = rot90(s)
        out.append((s, m))
    return out


# large prime denominator for the off-grid half of the samples
_FINE_DENOMINATOR = 1_000_003


def _sample_offsets(rng: random.Random, n, cfg: EnumerationConfig, k):
    if k % 2 == 0:
        q = cfg.grid_denominator
        return [Fraction(rng.randrange(q), q) for _ in range(n)]
    return [Fraction(rng.randrange(_FINE_DENOMINATOR), _FINE_DENOMINATOR) for _ in range(n)]


def _evaluate(slopes_normals, offsets):
    lines = tuple(TorusLine(s, c) for (s, _), c in zip(slopes_normals, offsets))
    arr = OrientedArrangement(lines, tuple(m for _, m in slopes_normals))
    try:
        cpx = color_cells(build_complex(arr))
    except (TriplePoint, CoincidentParallels):
        return None
    ok, _ = is_admissible(cpx)
    return signature(cpx), ok, cpx


def enumerate_admissible(p: LatticePolygon, cfg: EnumerationConfig = EnumerationConfig(), jobs: int = 1, strict: bool = True):
    """Saturation-sample the offset torus and keep one admissible complex per signature.

    Sampling stops once ``saturation_count`` consecutive samples add no new
    signature (admissible or not).  With ``strict`` an unsaturated run raises
    :class:`Unsaturated` carrying the partial result.
    """
    sn = polygon_lines(p)
    cfg.check(len(sn))
    rng = random.Random(cfg.seed)
    seen: set[bytes] = set()
    found: dict[bytes, ArrangementComplex] = {}
    since_new = 0
    k = simple = 0
    pool = None
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        pool = ProcessPoolExecutor(max_workers=jobs)
    batch = 64 * max(jobs, 1)
    try:
        while since_new < cfg.saturation_count and k < cfg.max_samples:
            todo = []
            while len(todo) < batch and k + len(todo) < cfg.max_samples:
                todo.append(_sample_offsets(rng, len(sn), cfg, k + len(todo)))
            if pool is not None:
                results = list(pool.map(_evaluate, [sn] * len(todo), todo, chunksize=16))
            else:
                results = [_evaluate(sn, t) for t in todo]
            for res in results:
                if since_new >= cfg.saturation_count:
                    break
                k += 1
                since_new += 1
                if res is None:
                    continue
                simple += 1
                sig, ok, cpx = res
                if sig not in seen:
                    seen.add(sig)
                    since_new = 0
                    if ok:
                        found[sig] = cpx
    finally:
        if pool is not None:
            pool.shutdown()
    sigs = sorted(found)
    result = EnumerationResult(
        [found[s] for s in sigs], sigs, k, simple, len(seen),
        since_new >= cfg.saturation_count,
        tuple(s for s, _ in sn), tuple(m for _, m in sn),
    )
    if strict and not result.saturated:
        raise Unsaturated(f"no saturation after {k} samples", result)
    return result


def require_admissible(c: ArrangementComplex) -> ArrangementComplex:
    if c.colors is None:
        c = color_cells(c)
    ok, bad = is_admissible(c)
    if not ok:
        raise NotAdmissible(f"edges {bad} bound no colored cell")
    return c
