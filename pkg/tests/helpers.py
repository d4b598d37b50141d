"""Shared builders and oracles for the test suite."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from hvdimer.arrangement import (
    OrientedArrangement,
    TorusLine,
    build_complex,
    color_cells,
    is_admissible,
    polygon_lines,
)
from hvdimer.errors import CoincidentParallels, TriplePoint
from hvdimer.hv import dual_dimer
from hvdimer.lattice import validate_polygon

SMALL_POLYGONS = {
    "unit": [(0, 0), (1, 0), (0, 1)],
    "square": [(0, 0), (1, 0), (1, 1), (0, 1)],
    "delta2": [(0, 0), (2, 0), (0, 1)],
    "z3": [(1, 0), (0, 1), (-1, -1)],
    "delta4": [(1, 0), (0, 1), (-1, 0), (-1, -1)],
    "hexagon": [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
}


def arrangement(slopes_normals, offsets):
    lines = tuple(TorusLine(s, c) for (s, _), c in zip(slopes_normals, offsets))
    return OrientedArrangement(lines, tuple(m for _, m in slopes_normals))


def random_admissible(vertices, seed, denominator=997, tries=400):
    """First admissible simple arrangement for the polygon under a seeded search."""
    sn = polygon_lines(validate_polygon(vertices))
    rng = random.Random(seed)
    for _ in range(tries):
        offs = [Fraction(rng.randrange(denominator), denominator) for _ in sn]
        try:
            cpx = color_cells(build_complex(arrangement(sn, offs)))
        except (TriplePoint, CoincidentParallels):
            continue
        if is_admissible(cpx)[0]:
            return cpx
    raise RuntimeError("no admissible sample found")


def random_model(name, seed):
    cpx = random_admissible(SMALL_POLYGONS[name], seed)
    return cpx, dual_dimer(cpx)


def subset_matchings(g):
    """All perfect matchings by scanning every edge subset (bitmask oracle)."""
    E, V = len(g.edges), len(g.nodes)
    masks = np.arange(1 << E, dtype=np.int64)
    bits = [(masks >> e) & 1 for e in range(E)]
    ok = np.ones(1 << E, dtype=bool)
    for n in range(V):
        cover = np.zeros(1 << E, dtype=np.int64)
        for e, ed in enumerate(g.edges):
            if n in (ed.w, ed.b):
                cover += bits[e]
        ok &= cover == 1
    return sorted(tuple(e for e in range(E) if (int(m) >> e) & 1) for m in np.flatnonzero(ok))


def brute_force_intersections(l1: TorusLine, l2: TorusLine):
    """Solve both lifted line equations over all relevant integer shifts."""
    (a1, b1), (a2, b2) = l1.slope, l2.slope
    det = b1 * (-a2) - (-a1) * b2
    pts = set()
    r1, r2 = abs(a1) + abs(b1) + 1, abs(a2) + abs(b2) + 1
    for k1, k2 in itertools.product(range(-r1, r1 + 1), range(-r2, r2 + 1)):
        c1, c2 = l1.offset + k1, l2.offset + k2
        # b1 x - a1 y = c1, b2 x - a2 y = c2
        x = Fraction(c1 * (-a2) - (-a1) * c2, det)
        y = Fraction(b1 * c2 - b2 * c1, det)
        pts.add((x % 1, y % 1))
    return pts
