"""Named reference inputs and the end-to-end reproduction suite."""
from __future__ import annotations

import time
from collections import Counter

from fractions import Fraction

from .arrangement import (
    EnumerationConfig,
    OrientedArrangement,
    TorusLine,
    build_complex,
    color_cells,
    enumerate_admissible,
    polygon_lines,
)
from .coamoeba import Trinomial, coamoeba_decomposition, parse_polynomial, verify_theorem3
from .dimer import centered_reference, characteristic_polynomial, enumerate_matchings, height_change
from .errors import HVError
from .hv import dual_dimer, verify_theorem1
from .lattice import GroupMatrix, validate_polygon
from .mckay import mckay_quiver, verify_theorem2

POLYGONS = {
    "unit_triangle": [(0, 0), (1, 0), (0, 1)],
    "delta2": [(0, 0), (2, 0), (0, 1)],
    "z3_triangle": [(1, 0), (0, 1), (-1, -1)],
    "z5_triangle": [(0, 0), (2, 1), (1, 3)],
    "delta4": [(1, 0), (0, 1), (-1, 0), (-1, -1)],
}

TRINOMIALS = {"base": "1 + x + y", "pullback": "1 + x^2*y + x*y^3"}


def polygon(name):
    return validate_polygon(POLYGONS[name])


def trinomial(name):
    return Trinomial.from_polynomial(parse_polynomial(TRINOMIALS[name]))


def z3_hexagonal_model():
    """Dual of one simple arrangement for the Z/3 triangle (all such are equivalent)."""
    sn = polygon_lines(polygon("z3_triangle"))
    offsets = (Fraction(0), Fraction(1, 7), Fraction(3, 11))
    lines = tuple(TorusLine(s, c) for (s, _), c in zip(sn, offsets))
    arr = OrientedArrangement(lines, tuple(m for _, m in sn))
    return dual_dimer(color_cells(build_complex(arr)))


def _timed(fn):
    t0 = time.perf_counter()
    try:
        out = fn()
    except HVError as exc:
        out = {"pass": False, "error": type(exc).__name__, "message": str(exc)}
    out["seconds"] = round(time.perf_counter() - t0, 3)
    return out


def _hexagon_check():
    g = z3_hexagonal_model()
    ms = enumerate_matchings(g)
    ref = centered_reference(g, ms)
    heights = Counter(height_change(g, d, ref) for d in ms)
    want = Counter({(1, 0): 1, (0, 1): 1, (-1, -1): 1, (0, 0): 3})
    z = characteristic_polynomial(g, ref, ms)
    return {"matchings": len(ms), "polynomial": str(z), "pass": len(ms) == 6 and heights == want}


def _mckay_check():
    q5 = mckay_quiver(GroupMatrix.from_rows([[2, 1], [1, 3]]))
    q1 = mckay_quiver(GroupMatrix.from_rows([[1, 0], [0, 1]]))
    counts = [len(q5.vertices), len(q5.arrows), len(q5.potential),
              sum(q5.is_binomial(a) for a in range(len(q5.arrows)))]
    rels = [q1.format_relation(a) for a in range(3)]
    return {"counts": counts, "identity_relations": rels,
            "pass": counts == [5, 15, 10, 15] and rels == ["yz - zy", "zx - xz", "xy - yx"]}


def run_suite(cfg: EnumerationConfig = EnumerationConfig(), jobs: int = 1, samples: int = 10_000,
              grid: int = 512, seed: int = 0):
    items = {}
    items["hexagonal_z3_charpoly"] = _timed(_hexagon_check)
    for name in POLYGONS:
        items[f"theorem1_{name}"] = _timed(lambda n=name: verify_theorem1(polygon(n), cfg, jobs))
    for name in ("delta2", "delta4"):
        items[f"unique_{name}"] = _timed(lambda n=name: _unique(n, cfg, jobs))
    for name in ("unit_triangle", "z3_triangle", "z5_triangle"):
        items[f"theorem2_{name}"] = _timed(lambda n=name: verify_theorem2(polygon(n), cfg, jobs))
    items["mckay_counts"] = _timed(_mckay_check)
    for name in TRINOMIALS:
        items[f"theorem3_{name}"] = _timed(lambda n=name: _coamoeba(n, samples, grid, seed))
    return {"pass": all(v["pass"] for v in items.values()), "items": items}


def _unique(name, cfg, jobs):
    res = enumerate_admissible(polygon(name), cfg, jobs=jobs)
    return {"admissible_signatures": len(res.signatures), "arrangement_types": res.distinct_types,
            "samples": res.samples, "pass": len(res.signatures) == 1}


def _coamoeba(name, samples, grid, seed):
    w = trinomial(name)
    return verify_theorem3(w, samples, grid, seed, decomposition=coamoeba_decomposition(w))
