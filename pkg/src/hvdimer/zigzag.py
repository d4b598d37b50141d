"""Zig-zag paths and the isoradiality / consistency checkers.

A zig-zag path is a cyclic sequence of darts.  Arriving at a white node it
leaves along the edge immediately counterclockwise of the arrival edge (the
sharpest right turn); at a black node, immediately clockwise.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations

from .dimer import DimerModel
from .errors import InvalidDimer
from .lattice import Lattice2, cross, is_primitive


@dataclass(frozen=True)
class ZigZagPath:
    steps: tuple[tuple[int, bool], ...]  # (edge id, traversed white -> black)
    homology: tuple[int, int]

    def darts(self):
        return [2 * e + (0 if wb else 1) for e, wb in self.steps]

    def to_json(self):
        return {"steps": [[e, wb] for e, wb in self.steps], "homology": list(self.homology)}


def _successor(g: DimerModel, d):
    # d leaves some node; the reversed dart sits at the node we arrive at
    arrive = d ^ 1
    node = g.dart_node(arrive)
    return g.rot_next(arrive, 1 if g.nodes[node].color == "w" else -1)


def zigzag_paths(g: DimerModel) -> list[ZigZagPath]:
    low = [n for n in range(len(g.nodes)) if g.degree(n) < 2]
    if low:
        raise InvalidDimer(f"zig-zag turning is undefined at nodes of degree < 2: {low}")
    seen = set()
    paths = []
    for start in range(2 * len(g.edges)):
        if start in seen:
            continue
        cyc, d = [], start
        while d not in seen:
            seen.add(d)
            cyc.append(d)
            d = _successor(g, d)
        assert d == start
        paths.append(ZigZagPath(tuple((x // 2, x % 2 == 0) for x in cyc), g.path_homology(cyc)))
    return paths


def _white_offsets(g: DimerModel, path: ZigZagPath):
    """Lift offset of the white end of each step's edge along the lifted path."""
    offs = []
    lam = (0, 0)
    for e, wb in path.steps:
        c = g.edges[e].crossing
        if wb:
            offs.append(lam)
            lam = (lam[0] + c[0], lam[1] + c[1])
        else:
            lam = (lam[0] - c[0], lam[1] - c[1])
            offs.append(lam)
    assert lam == path.homology
    return offs


def _pair_crossings(p1: ZigZagPath, p2: ZigZagPath):
    """Shared edges of two paths: list of (edge, sign, index1, index2)."""
    at2 = defaultdict(list)
    for k, (e, wb) in enumerate(p2.steps):
        at2[e].append(k)
    out = []
    for k, (e, wb) in enumerate(p1.steps):
        for k2 in at2.get(e, ()):
            if p2.steps[k2][1] != wb:
                out.append((e, 1 if wb else -1, k, k2))
    return out


def check_isoradiality(g: DimerModel):
    paths = zigzag_paths(g)
    violations = []
    for i, p in enumerate(paths):
        reps = [e for e, c in Counter(e for e, _ in p.steps).items() if c > 1]
        if reps:
            violations.append({"kind": "not_simple", "path": i, "edges": sorted(reps)})
        if p.homology == (0, 0):
            violations.append({"kind": "null_homologous", "path": i})
        elif not is_primitive(p.homology):
            violations.append({"kind": "non_primitive", "path": i, "homology": list(p.homology)})
    pairs = []
    for i, j in combinations(range(len(paths)), 2):
        zi, zj = paths[i].homology, paths[j].homology
        xs = _pair_crossings(paths[i], paths[j])
        d = abs(cross(zi, zj))
        signs = Counter(s for _, s, _, _ in xs)
        pairs.append({"paths": [i, j], "det": d, "crossings": len(xs), "signs": dict(signs)})
        ok = len(xs) == d and len(signs) <= 1
        if not ok:
            violations.append({"kind": "pair", "paths": [i, j], "det": d,
                               "crossings": len(xs), "signs": {str(k): v for k, v in signs.items()}})
    return {"pass": not violations, "violations": violations, "num_paths": len(paths), "pairs": pairs}


def check_consistency(g: DimerModel):
    paths = zigzag_paths(g)
    offsets = [_white_offsets(g, p) for p in paths]
    violations = []
    for i, p in enumerate(paths):
        if p.homology == (0, 0):
            violations.append({"kind": "NullHomologous", "path": i})
        period = Lattice2([p.homology])
        first = {}
        for k, (e, _) in enumerate(p.steps):
            key = (e, period.reduce(offsets[i][k]))
            if key in first:
                violations.append({"kind": "SelfIntersection", "path": i, "edge": e})
                break
            first[key] = k
    for i, j in combinations(range(len(paths)), 2):
        zi, zj = paths[i].homology, paths[j].homology
        xs = _pair_crossings(paths[i], paths[j])
        if not xs:
            continue
        common_period = zi != (0, 0) and zj != (0, 0) and cross(zi, zj) == 0
        lat = Lattice2([zi, zj])
        per_class = Counter()
        for e, s, k1, k2 in xs:
            o1, o2 = offsets[i][k1], offsets[j][k2]
            per_class[(lat.reduce((o1[0] - o2[0], o1[1] - o2[1])), s)] += 1
        # with a common period, one crossing of two lifts repeats forever
        limit = 0 if common_period else 1
        bad = {k: v for k, v in per_class.items() if v > limit}
        if bad:
            violations.append({"kind": "SameDirectionTwice", "paths": [i, j],
                               "classes": len(bad)})
    return {"pass": not violations, "violations": violations, "num_paths": len(paths)}
