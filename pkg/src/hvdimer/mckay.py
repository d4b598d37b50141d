"""McKay quivers of abelian subgroups of SL_3 as periodic triangle quivers.

The group is given by P = [[p, r], [q, s]]; quiver vertices are the residues
of Z^2 modulo the column lattice of P^T and every vertex carries arrows
x, y, z with displacements (1, 0), (0, 1), (-1, -1).  The torus picture is
transported to R^2/Z^2 by the inverse of P^T.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .dimer import DimerModel, Edge, Node
from .errors import SingularMatrix, ValidationError
from .lattice import GroupMatrix, Lattice2, LatticePolygon, triangle_to_matrix

DISPLACEMENT = {"x": (1, 0), "y": (0, 1), "z": (-1, -1)}


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int
    label: str
    crossing: Optional[tuple[int, int]] = None


@dataclass
class QuiverWithPotential:
    vertices: list
    arrows: list[Arrow]
    potential: list[tuple[int, tuple[int, ...]]]  # (sign, arrows in traversal order)
    relations: list = field(default_factory=list)

    def __post_init__(self):
        if not self.relations:
            self.relations = [cyclic_derivative(self.potential, a) for a in range(len(self.arrows))]

    def arrow_name(self, a):
        arr = self.arrows[a]
        if len(self.vertices) == 1 or len(arr.label) > 1:
            return arr.label
        return f"{arr.label}{arr.source}"

    def format_path(self, path):
        """Path in product notation: the first arrow traversed is written last."""
        return "".join(self.arrow_name(a) for a in reversed(path))

    def format_relation(self, a):
        rel = self.relations[a]
        plus = [p for p, c in rel.items() if c > 0]
        minus = [p for p, c in rel.items() if c < 0]
        terms = [self.format_path(p) for p in plus] + ["- " + self.format_path(p) for p in minus]
        return " ".join(t if i == 0 or t.startswith("- ") else "+ " + t for i, t in enumerate(terms))

    def is_binomial(self, a):
        rel = self.relations[a]
        return sorted(rel.values()) == [-1, 1]

    def check_paths(self):
        for sign, cyc in self.potential:
            for i, a in enumerate(cyc):
                nxt = cyc[(i + 1) % len(cyc)]
                if self.arrows[a].target != self.arrows[nxt].source:
                    return False
        return True

    def to_json(self):
        return {
            "vertices": [list(v) if isinstance(v, tuple) else v for v in self.vertices],
            "arrows": [
                {"source": a.source, "target": a.target, "label": a.label,
                 "crossing": list(a.crossing) if a.crossing is not None else None}
                for a in self.arrows
            ],
            "potential": [{"sign": s, "cycle": list(c)} for s, c in self.potential],
            "relations": [
                {
                    "arrow": a,
                    "paths": [{"coefficient": c, "path": list(p)} for p, c in sorted(rel.items())],
                }
                for a, rel in enumerate(self.relations)
            ],
        }

    def to_dot(self):
        lines = ["digraph quiver {"]
        for i, v in enumerate(self.vertices):
            lines.append(f'  v{i} [label="{v}"];')
        for a, arr in enumerate(self.arrows):
            lines.append(f'  v{arr.source} -> v{arr.target} [label="{self.arrow_name(a)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def cyclic_derivative(potential, arrow) -> dict:
    """Derivative of a signed sum of cycles by one arrow: {path: coefficient}."""
    out = Counter()
    for sign, cyc in potential:
        n = len(cyc)
        for i, a in enumerate(cyc):
            if a == arrow:
                out[tuple(cyc[(i + k) % n] for k in range(1, n))] += sign
    return {p: c for p, c in out.items() if c}


def _rotate_min(cyc):
    k = cyc.index(min(cyc))
    return tuple(cyc[k:] + cyc[:k])


class _Geometry:
    """Residue bookkeeping for Z^2 / P^T Z^2 and the map to the unit torus."""

    def __init__(self, P: GroupMatrix):
        if P.det == 0:
            raise SingularMatrix("det P = 0")
        if P.det < 0:
            raise ValidationError("det P must be positive")
        self.P = P
        self.lattice = Lattice2(P.transpose_columns())
        self.residues = self.lattice.residues()
        self.index = {v: k for k, v in enumerate(self.residues)}
        assert len(self.residues) == P.det

    def vid(self, v):
        return self.index[self.lattice.reduce(v)]

    def to_torus(self, u):
        """(P^T)^{-1} u as exact rationals."""
        P, det = self.P, Fraction(self.P.det)
        # P^T = [[p, q], [r, s]]
        return ((P.s * u[0] - P.q * u[1]) / det, (-P.r * u[0] + P.p * u[1]) / det)


def _frac_split(x):
    f = math.floor(x)
    return f, x - f


def mckay_quiver(P: GroupMatrix) -> QuiverWithPotential:
    geo = _Geometry(P)
    arrows = []
    arrow_id = {}
    for k, v in enumerate(geo.residues):
        lv = geo.to_torus(v)
        for lab in "xyz":
            d = DISPLACEMENT[lab]
            t = (v[0] + d[0], v[1] + d[1])
            lt = geo.to_torus(t)
            tc = geo.residues[geo.vid(t)]
            ltc = geo.to_torus(tc)
            # crossing from canonical source lift to canonical target lift
            cx = (lt[0] - math.floor(lv[0])) - (ltc[0] - math.floor(ltc[0]))
            cy = (lt[1] - math.floor(lv[1])) - (ltc[1] - math.floor(ltc[1]))
            assert cx.denominator == 1 and cy.denominator == 1
            arrow_id[(lab, k)] = len(arrows)
            arrows.append(Arrow(k, geo.vid(t), lab, (int(cx), int(cy))))

    def a(lab, v):
        return arrow_id[(lab, geo.vid(v))]

    potential = []
    for v in geo.residues:
        x1 = (v[0] + 1, v[1])
        # clockwise triangle v -> v+x -> v-y -> v: a white node sits inside
        potential.append((1, _rotate_min([a("x", v), a("z", x1), a("y", (v[0], v[1] - 1))])))
    for v in geo.residues:
        x1 = (v[0] + 1, v[1])
        xy = (v[0] + 1, v[1] + 1)
        # counterclockwise triangle v -> v+x -> v+x+y -> v around a black node
        potential.append((-1, _rotate_min([a("x", v), a("y", x1), a("z", xy)])))
    return QuiverWithPotential(list(geo.residues), arrows, potential)


@dataclass
class HexTiling:
    dimer: DimerModel
    quiver: QuiverWithPotential


def quiver_tiling(P: GroupMatrix) -> HexTiling:
    """The honeycomb dimer model dual to :func:`mckay_quiver`."""
    geo = _Geometry(P)
    q = mckay_quiver(P)
    nv = len(geo.residues)

    def tri_white(v):
        return [v, (v[0] + 1, v[1]), (v[0], v[1] - 1)]

    def tri_black(v):
        return [v, (v[0] + 1, v[1]), (v[0] + 1, v[1] + 1)]

    def centroid(tri):
        cx = Fraction(sum(p[0] for p in tri), 3)
        cy = Fraction(sum(p[1] for p in tri), 3)
        return geo.to_torus((cx, cy))

    nodes = []
    for v in geo.residues:
        nodes.append(Node("w", centroid(tri_white(v))))
    for v in geo.residues:
        nodes.append(Node("b", centroid(tri_black(v))))

    edges = []
    for arr in q.arrows:
        s = geo.residues[arr.source]
        if arr.label == "x":
            wv, bv = s, s
        elif arr.label == "y":
            wv, bv = (s[0], s[1] + 1), (s[0] - 1, s[1])
        else:
            wv, bv = (s[0] - 1, s[1]), (s[0] - 1, s[1] - 1)
        cw, cb = centroid(tri_white(wv)), centroid(tri_black(bv))
        crossing = (math.floor(cb[0]) - math.floor(cw[0]), math.floor(cb[1]) - math.floor(cw[1]))
        edges.append(Edge(geo.vid(wv), nv + geo.vid(bv), crossing))

    rotation = []
    for v in geo.residues:
        rotation.append((_arrow(geo, "x", v), _arrow(geo, "y", (v[0], v[1] - 1)),
                         _arrow(geo, "z", (v[0] + 1, v[1]))))
    for v in geo.residues:
        rotation.append((_arrow(geo, "x", v), _arrow(geo, "y", (v[0] + 1, v[1])),
                         _arrow(geo, "z", (v[0] + 1, v[1] + 1))))
    return HexTiling(DimerModel(tuple(nodes), tuple(edges), tuple(rotation)), q)


def _arrow(geo, label, v):
    return 3 * geo.vid(v) + "xyz".index(label)


def dimer_to_quiver(g: DimerModel) -> QuiverWithPotential:
    """Faces become vertices, edges become arrows with the white node on the right."""
    centers = _face_centers(g)
    arrows = []
    for e, ed in enumerate(g.edges):
        src, tgt = g.face_of(2 * e), g.face_of(2 * e + 1)
        # both face centers in the frame of the white endpoint's canonical lift
        cs, os_ = centers[src][0], centers[src][1][2 * e]
        ct, ot = centers[tgt][0], centers[tgt][1][2 * e + 1]
        S = (cs[0] - os_[0], cs[1] - os_[1])
        T = (ct[0] - ot[0] + ed.crossing[0], ct[1] - ot[1] + ed.crossing[1])
        crossing = (math.floor(T[0]) - math.floor(S[0]), math.floor(T[1]) - math.floor(S[1]))
        arrows.append(Arrow(src, tgt, f"e{e}", crossing))
    potential = []
    for n in range(len(g.nodes)):
        rot = list(g.rotation[n])
        if g.nodes[n].color == "w":
            potential.append((1, _rotate_min(rot[::-1])))
    for n in range(len(g.nodes)):
        if g.nodes[n].color == "b":
            potential.append((-1, _rotate_min(list(g.rotation[n]))))
    return QuiverWithPotential(list(range(len(g.faces))), arrows, potential)


def _face_centers(g: DimerModel):
    """Per face: (lifted center, {dart: lift offset of the dart's start node})."""
    out = []
    for face in g.faces:
        offs = {}
        lam = (0, 0)
        pts = []
        for d in face:
            offs[d] = lam
            p = g.nodes[g.dart_node(d)].pos
            pts.append((p[0] + lam[0], p[1] + lam[1]))
            v = g.dart_vec(d)
            lam = (lam[0] + v[0], lam[1] + v[1])
        c = (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))
        out.append((c, offs))
    return out


def verify_theorem2(t: LatticePolygon, cfg=None, jobs: int = 1):
    from .arrangement import EnumerationConfig
    from .hv import linear_hv
    from .isomorphism import dimer_isomorphic

    cfg = cfg or EnumerationConfig()
    P = triangle_to_matrix(t)
    res, models = linear_hv(t, cfg, jobs)
    tiling = quiver_tiling(P)
    unique = len(models) == 1
    iso = unique and dimer_isomorphic(models[0], tiling.dimer)
    return {
        "triangle": [list(v) for v in t.vertices],
        "matrix": P.rows(),
        "order": P.det,
        "num_models": len(models),
        "unique": unique,
        "isomorphic_to_mckay_dual": bool(iso),
        "pass": bool(unique and iso),
    }
