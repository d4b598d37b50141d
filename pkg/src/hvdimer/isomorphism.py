"""Isomorphism of dimer models as bicolored combinatorial maps on the torus.

Two models are isomorphic when a color-preserving bijection of darts
commutes with the edge involution and with the rotation (or with its
inverse, for a reflection).  The induced map on H_1 must then be unimodular,
of determinant +1 or -1 accordingly, and carry one characteristic polygon
onto the other up to translation.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction

from .dimer import DimerModel, characteristic_polynomial
from .errors import DegenerateInput, NoMatching
from .lattice import hull_polygon, normalize_translation


def _code(g: DimerModel, start: int, mirror: bool):
    step = -1 if mirror else 1
    label = {start: 0}
    order = [start]
    queue = deque([start])
    while queue:
        d = queue.popleft()
        for nb in (g.rot_next(d, step), d ^ 1):
            if nb not in label:
                label[nb] = len(order)
                order.append(nb)
                queue.append(nb)
    if len(order) != 2 * len(g.edges):
        raise ValueError("model is disconnected")
    code = tuple((label[g.rot_next(d, step)], label[d ^ 1], d & 1) for d in order)
    return code, order


def canonical_form(g: DimerModel, mirror: bool = False):
    """Minimal traversal code over all starting darts at white nodes."""
    best = None
    for start in range(0, 2 * len(g.edges), 2):
        code, order = _code(g, start, mirror)
        if best is None or code < best[0]:
            best = (code, order)
    return best


def find_isomorphism(g1: DimerModel, g2: DimerModel, allow_reflection: bool = True):
    """Return (dart map g1 -> g2, reflected) or None."""
    if (len(g1.nodes), len(g1.edges), len(g1.whites)) != (len(g2.nodes), len(g2.edges), len(g2.whites)):
        return None
    if not g1.edges:
        return None
    code1, order1 = canonical_form(g1)
    for mirror in ((False, True) if allow_reflection else (False,)):
        for start in range(0, 2 * len(g2.edges), 2):
            code2, order2 = _code(g2, start, mirror)
            if code2 == code1:
                return dict(zip(order1, order2)), mirror
    return None


def _potentials(g: DimerModel, tree_edges=None):
    """Node lift offsets from a BFS tree; returns (offsets, tree edge set)."""
    pot = {0: (0, 0)}
    tree = set()
    queue = deque([0])
    inc = {n: g.rotation[n] for n in range(len(g.nodes))}
    while queue:
        n = queue.popleft()
        for e in inc[n]:
            if tree_edges is not None and e not in tree_edges:
                continue
            ed = g.edges[e]
            other, sgn = (ed.b, 1) if n == ed.w else (ed.w, -1)
            if other in pot:
                continue
            c = ed.crossing
            pot[other] = (pot[n][0] + sgn * c[0], pot[n][1] + sgn * c[1])
            tree.add(e)
            queue.append(other)
    return pot, tree


def homology_map(g1: DimerModel, g2: DimerModel, dart_map):
    """Integer matrix U with U h1(cycle) = h2(image cycle), or None."""
    emap = {d // 2: dart_map[d] // 2 for d in dart_map if d % 2 == 0}
    nmap = {g1.dart_node(d): g2.dart_node(dart_map[d]) for d in dart_map}
    pot1, tree1 = _potentials(g1)
    # relabel g2 so that node 0 of g1 maps to the BFS root
    pot2 = {nmap[0]: (0, 0)}
    queue = deque([0])
    while queue:
        n = queue.popleft()
        for e in g1.rotation[n]:
            if e not in tree1:
                continue
            ed = g1.edges[e]
            other = ed.b if n == ed.w else ed.w
            if nmap[other] in pot2:
                continue
            e2 = g2.edges[emap[e]]
            sgn = 1 if nmap[n] == e2.w else -1
            base = pot2[nmap[n]]
            pot2[nmap[other]] = (base[0] + sgn * e2.crossing[0], base[1] + sgn * e2.crossing[1])
            queue.append(other)
    pairs = []
    for e, ed in enumerate(g1.edges):
        r1 = tuple(pot1[ed.w][k] + ed.crossing[k] - pot1[ed.b][k] for k in range(2))
        e2 = g2.edges[emap[e]]
        r2 = tuple(pot2[e2.w][k] + e2.crossing[k] - pot2[e2.b][k] for k in range(2))
        pairs.append((r1, r2))
    basis = None
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            a, b = pairs[i][0], pairs[j][0]
            if a[0] * b[1] - a[1] * b[0] != 0:
                basis = (i, j)
                break
        if basis:
            break
    if basis is None:
        return None
    (a, ia), (b, ib) = pairs[basis[0]], pairs[basis[1]]
    det = Fraction(a[0] * b[1] - a[1] * b[0])
    # U = [ia ib] [a b]^{-1}
    inv = [[b[1] / det, -b[0] / det], [-a[1] / det, a[0] / det]]
    U = [[ia[0] * inv[0][0] + ib[0] * inv[1][0], ia[0] * inv[0][1] + ib[0] * inv[1][1]],
         [ia[1] * inv[0][0] + ib[1] * inv[1][0], ia[1] * inv[0][1] + ib[1] * inv[1][1]]]
    if any(x.denominator != 1 for row in U for x in row):
        return None
    U = [[int(x) for x in row] for row in U]
    for r1, r2 in pairs:
        if (U[0][0] * r1[0] + U[0][1] * r1[1], U[1][0] * r1[0] + U[1][1] * r1[1]) != r2:
            return None
    return U


def _transform_heights(U, pts):
    (a, b), (c, d) = U
    # det(U) * U^{-T}
    return [(d * x - c * y, -b * x + a * y) for x, y in pts]


def dimer_isomorphic(g1: DimerModel, g2: DimerModel, check_polygon: bool = True) -> bool:
    found = find_isomorphism(g1, g2)
    if found is None:
        return False
    dart_map, mirror = found
    U = homology_map(g1, g2, dart_map)
    if U is None:
        return False
    det = U[0][0] * U[1][1] - U[0][1] * U[1][0]
    if det != (-1 if mirror else 1):
        return False
    if check_polygon:
        try:
            z1 = characteristic_polynomial(g1).terms
            z2 = characteristic_polynomial(g2).terms
        except NoMatching:
            return True
        try:
            p1 = normalize_translation(hull_polygon(_transform_heights(U, z1)))
            p2 = normalize_translation(hull_polygon(z2))
        except DegenerateInput:
            return _normalized(_transform_heights(U, z1)) == _normalized(z2)
        if p1 != p2:
            return False
    return True


def _normalized(pts):
    pts = sorted(set(pts))
    lo = pts[0]
    return [(x - lo[0], y - lo[1]) for x, y in pts]
