"""Bicolored graphs on the torus, perfect matchings and height changes.

An edge stores the white endpoint, the black endpoint and an integer
``crossing``: the lift of the black node reached from the white node's
canonical lift (in [0,1)^2) along the edge sits at ``pos(b) + crossing``.
Darts are numbered ``2*e`` (at the white end, pointing to black) and
``2*e + 1`` (at the black end).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidDimer, NoMatching, NotAMatching
from .lattice import LatticePolygon, hull_polygon, normalize_translation

# Global sign of the height change.  Together with the line-slope convention
# it is pinned by the golden tests (hexagonal model heights, Theorem 1 on
# asymmetric polygons).
HEIGHT_SIGN = 1


@dataclass(frozen=True)
class Node:
    color: str  # "w" or "b"
    pos: tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Edge:
    w: int
    b: int
    crossing: tuple[int, int]


def _frac(x) -> Fraction:
    f = Fraction(x)
    return f - math.floor(f)


@dataclass(frozen=True, eq=False)
class DimerModel:
    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    rotation: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        nodes = tuple(Node(n.color, (_frac(n.pos[0]), _frac(n.pos[1]))) for n in self.nodes)
        edges = tuple(Edge(int(e.w), int(e.b), (int(e.crossing[0]), int(e.crossing[1]))) for e in self.edges)
        rotation = tuple(tuple(int(x) for x in r) for r in self.rotation)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "rotation", rotation)
        self._validate()

    def _validate(self):
        if len(self.rotation) != len(self.nodes):
            raise InvalidDimer("one rotation list per node required")
        for i, e in enumerate(self.edges):
            if not (0 <= e.w < len(self.nodes) and 0 <= e.b < len(self.nodes)):
                raise InvalidDimer(f"edge {i} references a missing node")
            if self.nodes[e.w].color != "w" or self.nodes[e.b].color != "b":
                raise InvalidDimer(f"edge {i} does not join a white and a black node")
        seen = Counter()
        for n, rot in enumerate(self.rotation):
            for e in rot:
                if not 0 <= e < len(self.edges):
                    raise InvalidDimer(f"rotation of node {n} lists unknown edge {e}")
                end = self.edges[e].w if self.nodes[n].color == "w" else self.edges[e].b
                if end != n:
                    raise InvalidDimer(f"edge {e} is not incident to node {n}")
                seen[e] += 1
        if any(seen[e] != 2 for e in range(len(self.edges))):
            raise InvalidDimer("every edge must appear exactly once at each endpoint")
        pos = {}
        for n, rot in enumerate(self.rotation):
            for k, e in enumerate(rot):
                pos[self._dart_at(e, n)] = (n, k)
        object.__setattr__(self, "_dart_pos", pos)
        faces = self._trace_faces()
        object.__setattr__(self, "_faces", faces)
        if self.euler() != 0:
            raise InvalidDimer(f"Euler characteristic {self.euler()} != 0 (not a torus embedding)")
        for f in faces:
            if self.path_homology(f) != (0, 0):
                raise InvalidDimer("a face boundary is not null-homologous")

    # -- darts -----------------------------------------------------------------

    def _dart_at(self, e, n):
        return 2 * e if self.nodes[n].color == "w" else 2 * e + 1

    def dart_node(self, d):
        e = self.edges[d // 2]
        return e.w if d % 2 == 0 else e.b

    def dart_vec(self, d):
        c = self.edges[d // 2].crossing
        return c if d % 2 == 0 else (-c[0], -c[1])

    def rot_next(self, d, step=1):
        """Dart ``step`` places counterclockwise from ``d`` at the same node."""
        n, k = self._dart_pos[d]
        rot = self.rotation[n]
        return self._dart_at(rot[(k + step) % len(rot)], n)

    def path_homology(self, darts):
        x = y = 0
        for d in darts:
            v = self.dart_vec(d)
            x += v[0]
            y += v[1]
        return (x, y)

    def _trace_faces(self):
        # the face on the left of a dart; next dart is clockwise from the reversed one
        faces, owner = [], {}
        for start in range(2 * len(self.edges)):
            if start in owner:
                continue
            cyc, d = [], start
            while d not in owner:
                owner[d] = len(faces)
                cyc.append(d)
                d = self.rot_next(d ^ 1, -1)
            faces.append(cyc)
        object.__setattr__(self, "_face_of", owner)
        return faces

    @property
    def faces(self):
        return self._faces

    def face_of(self, d):
        return self._face_of[d]

    def euler(self):
        return len(self.nodes) - len(self.edges) + len(self._faces)

    # -- convenience -------------------------------------------------------------

    @property
    def whites(self):
        return [i for i, n in enumerate(self.nodes) if n.color == "w"]

    @property
    def blacks(self):
        return [i for i, n in enumerate(self.nodes) if n.color == "b"]

    def degree(self, n):
        return len(self.rotation[n])

    def translated(self, t):
        """Same model moved by a torus translation ``t``."""
        t = (Fraction(t[0]), Fraction(t[1]))
        nodes, shift = [], []
        for n in self.nodes:
            x, y = n.pos[0] + t[0], n.pos[1] + t[1]
            shift.append((math.floor(x), math.floor(y)))
            nodes.append(Node(n.color, (x, y)))
        edges = [
            Edge(e.w, e.b, (e.crossing[0] + shift[e.b][0] - shift[e.w][0],
                            e.crossing[1] + shift[e.b][1] - shift[e.w][1]))
            for e in self.edges
        ]
        return DimerModel(tuple(nodes), tuple(edges), self.rotation)

    def to_json(self):
        return {
            "nodes": [{"color": n.color, "pos": [str(n.pos[0]), str(n.pos[1])]} for n in self.nodes],
            "edges": [{"w": e.w, "b": e.b, "crossing": list(e.crossing)} for e in self.edges],
            "rotation": [list(r) for r in self.rotation],
        }

    @classmethod
    def from_json(cls, data):
        try:
            nodes = tuple(
                Node(d["color"], (Fraction(d["pos"][0]), Fraction(d["pos"][1]))) for d in data["nodes"]
            )
            edges = tuple(Edge(d["w"], d["b"], tuple(d["crossing"])) for d in data["edges"])
            rotation = tuple(tuple(r) for r in data["rotation"])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidDimer(f"malformed dimer JSON: {exc}") from exc
        return cls(nodes, edges, rotation)


# -- perfect matchings ----------------------------------------------------------

PerfectMatching = tuple  # sorted tuple of edge ids


def enumerate_matchings(g: DimerModel) -> list[tuple[int, ...]]:
    whites, blacks = g.whites, g.blacks
    if len(whites) != len(blacks):
        return []
    inc = {w: sorted(set(g.rotation[w])) for w in whites}
    used_b: set[int] = set()
    chosen: list[int] = []
    out = []
    # most constrained white nodes first
    order = sorted(whites, key=lambda w: (len(inc[w]), w))

    def rec(i):
        if i == len(order):
            out.append(tuple(sorted(chosen)))
            return
        for e in inc[order[i]]:
            b = g.edges[e].b
            if b in used_b:
                continue
            used_b.add(b)
            chosen.append(e)
            rec(i + 1)
            chosen.pop()
            used_b.discard(b)

    rec(0)
    return sorted(out)


def is_perfect_matching(g: DimerModel, d) -> bool:
    cover = Counter()
    for e in d:
        if not 0 <= e < len(g.edges):
            return False
        cover[g.edges[e].w] += 1
        cover[g.edges[e].b] += 1
    return len(d) == len(set(d)) and all(cover[n] == 1 for n in range(len(g.nodes)))


def _generic_level(coords):
    vals = sorted(set(coords) | {Fraction(0)})
    gaps = [(vals[i + 1] - vals[i], i) for i in range(len(vals) - 1)] + [(1 + vals[0] - vals[-1], len(vals) - 1)]
    _, i = max(gaps)
    hi = vals[i + 1] if i + 1 < len(vals) else 1 + vals[0]
    return _frac((vals[i] + hi) / 2)


def _crossings(g: DimerModel, e, axis, level):
    """Signed count of the edge segment crossing the lines {coord = level mod 1}."""
    ed = g.edges[e]
    p = g.nodes[ed.w].pos[axis]
    q = g.nodes[ed.b].pos[axis] + ed.crossing[axis]
    return math.floor(q - level) - math.floor(p - level)


def height_change(g: DimerModel, d, d0, y0=None, x0=None) -> tuple[int, int]:
    """Height change of ``d`` against ``d0`` along the horizontal and vertical loops.

    ``y0``/``x0`` are the heights of the loops; they must avoid node coordinates.
    """
    for m in (d, d0):
        if not is_perfect_matching(g, m):
            raise NotAMatching(f"{m} is not a perfect matching")
    if y0 is None:
        y0 = _generic_level([n.pos[1] for n in g.nodes])
    if x0 is None:
        x0 = _generic_level([n.pos[0] for n in g.nodes])
    y0, x0 = _frac(y0), _frac(x0)
    if any(n.pos[1] == y0 for n in g.nodes) or any(n.pos[0] == x0 for n in g.nodes):
        raise ValueError("loop passes through a node")
    # walking +x: black on the right of the walk <=> the w->b segment runs downward
    hx = -sum(_crossings(g, e, 1, y0) for e in d) + sum(_crossings(g, e, 1, y0) for e in d0)
    # walking +y: black on the right <=> the segment runs in +x
    hy = sum(_crossings(g, e, 0, x0) for e in d) - sum(_crossings(g, e, 0, x0) for e in d0)
    return (HEIGHT_SIGN * hx, HEIGHT_SIGN * hy)


@dataclass(frozen=True)
class CharPolynomial:
    terms: dict

    @property
    def num_matchings(self):
        return sum(self.terms.values())

    def exponents(self):
        return sorted(self.terms)

    def shifted(self, v):
        return CharPolynomial({(i - v[0], j - v[1]): c for (i, j), c in self.terms.items()})

    def __str__(self):
        def mono(i, j):
            parts = []
            for var, k in (("x", i), ("y", j)):
                if k == 1:
                    parts.append(var)
                elif k:
                    parts.append(f"{var}^{k}")
            return "*".join(parts)

        out = []
        for (i, j) in sorted(self.terms, key=lambda t: (abs(t[0]) + abs(t[1]), -t[0], -t[1])):
            c, m = self.terms[(i, j)], mono(i, j)
            out.append(str(c) if not m else (m if c == 1 else f"{c}*{m}"))
        return " + ".join(out)

    def to_json(self):
        return {"terms": [[i, j, c] for (i, j), c in sorted(self.terms.items())], "text": str(self)}


def characteristic_polynomial(g: DimerModel, d0=None, matchings=None) -> CharPolynomial:
    ms = enumerate_matchings(g) if matchings is None else matchings
    if not ms:
        raise NoMatching("model has no perfect matching")
    if d0 is None:
        d0 = ms[0]
    return CharPolynomial(dict(Counter(height_change(g, d, d0) for d in ms)))


def centered_reference(g: DimerModel, matchings=None):
    """Matching minimizing the total L1 size of all height changes (first on ties)."""
    ms = enumerate_matchings(g) if matchings is None else matchings
    if not ms:
        raise NoMatching("model has no perfect matching")
    h = {d: height_change(g, d, ms[0]) for d in ms}
    return min(ms, key=lambda r: sum(abs(h[d][0] - h[r][0]) + abs(h[d][1] - h[r][1]) for d in ms))


def characteristic_polygon(g: DimerModel) -> LatticePolygon:
    return normalize_translation(hull_polygon(characteristic_polynomial(g).terms))
