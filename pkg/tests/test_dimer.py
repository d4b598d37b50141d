import json
from collections import Counter
from fractions import Fraction as F
from pathlib import Path

import pytest

from hvdimer.dimer import (
    DimerModel,
    Edge,
    Node,
    centered_reference,
    characteristic_polygon,
    characteristic_polynomial,
    enumerate_matchings,
    height_change,
    is_perfect_matching,
)
from hvdimer.errors import InvalidDimer, NoMatching, NotAMatching
from hvdimer.hv import linear_hv, verify_theorem1
from hvdimer.lattice import GroupMatrix, validate_polygon
from hvdimer.mckay import quiver_tiling
from hvdimer.repro import z3_hexagonal_model

from helpers import subset_matchings

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_z3_hexagon_heights():
    g = z3_hexagonal_model()
    ms = enumerate_matchings(g)
    assert len(ms) == 6
    ref = centered_reference(g, ms)
    hs = Counter(height_change(g, d, ref) for d in ms)
    assert hs == {(1, 0): 1, (0, 1): 1, (-1, -1): 1, (0, 0): 3}
    assert str(characteristic_polynomial(g, ref)) == "3 + x + y + x^-1*y^-1"


def test_first_matching_reference_differs_by_a_monomial():
    g = z3_hexagonal_model()
    z_first = characteristic_polynomial(g)
    z_cent = characteristic_polynomial(g, centered_reference(g))
    shifts = {(a[0] - b[0], a[1] - b[1]) for a, b in zip(sorted(z_first.terms), sorted(z_cent.terms))}
    assert len(shifts) == 1
    assert z_first.num_matchings == z_cent.num_matchings == 6


def test_unit_hexagon():
    g = quiver_tiling(GroupMatrix.from_rows([[1, 0], [0, 1]])).dimer
    assert (len(g.nodes), len(g.edges), len(g.faces)) == (2, 3, 1)
    assert len(enumerate_matchings(g)) == 3
    poly = characteristic_polygon(g)
    assert len(poly.vertices) == 3 and poly.doubled_area == 1


def test_matching_enumeration_matches_oracle():
    g = z3_hexagonal_model()
    assert enumerate_matchings(g) == subset_matchings(g)


def test_no_matching_fixture():
    g = DimerModel.from_json(json.loads((FIXTURES / "no_matching.json").read_text()))
    assert enumerate_matchings(g) == []
    with pytest.raises(NoMatching):
        characteristic_polynomial(g)


def test_height_change_validates_matchings():
    g = z3_hexagonal_model()
    d0 = enumerate_matchings(g)[0]
    assert height_change(g, d0, d0) == (0, 0)
    assert not is_perfect_matching(g, (0,))
    with pytest.raises(NotAMatching):
        height_change(g, (0,), d0)


def test_height_change_rejects_loop_through_node():
    g = z3_hexagonal_model()
    d0 = enumerate_matchings(g)[0]
    with pytest.raises(ValueError):
        height_change(g, d0, d0, y0=g.nodes[0].pos[1])


def test_invalid_models():
    w, b = Node("w", (F(0), F(0))), Node("b", (F(1, 2), F(1, 2)))
    with pytest.raises(InvalidDimer):  # sphere, not torus
        DimerModel((w, b), (Edge(0, 1, (0, 0)), Edge(0, 1, (0, 0))), ((0, 1), (1, 0)))
    with pytest.raises(InvalidDimer):
        DimerModel((w, Node("w", (F(1, 2), F(0)))), (Edge(0, 1, (0, 0)),), ((0,), (0,)))
    with pytest.raises(InvalidDimer):
        DimerModel((w, b), (Edge(0, 1, (0, 0)),), ((0,), ()))
    with pytest.raises(InvalidDimer):
        DimerModel.from_json({"nodes": [{"color": "w"}], "edges": [], "rotation": []})


def test_json_round_trip_and_translation():
    g = z3_hexagonal_model()
    h = DimerModel.from_json(json.loads(json.dumps(g.to_json())))
    assert h.to_json() == g.to_json()
    t = g.translated((F(3, 7), F(-2, 9)))
    assert characteristic_polynomial(t).terms == characteristic_polynomial(g).terms


@pytest.mark.parametrize("verts, counts", [
    ([(0, 0), (1, 0), (0, 1)], (2, 3, 1)),
    ([(0, 0), (2, 0), (0, 1)], (4, 6, 2)),
    ([(1, 0), (0, 1), (-1, -1)], (6, 9, 3)),
    ([(0, 0), (2, 1), (1, 3)], (10, 15, 5)),
    ([(1, 0), (0, 1), (-1, 0), (-1, -1)], (6, 10, 4)),
])
def test_hv_model_sizes(verts, counts):
    _, models = linear_hv(validate_polygon(verts))
    assert len(models) == 1
    g = models[0]
    assert (len(g.nodes), len(g.edges), len(g.faces)) == counts
    assert len(g.whites) == len(g.blacks)


def test_theorem1_report_shape():
    rep = verify_theorem1(validate_polygon([(0, 0), (2, 0), (0, 1)]))
    assert rep["pass"] and rep["num_models"] == 1
    m = rep["models"][0]
    assert m["polygon_matches"] and m["isoradial"] and m["consistent"] and m["zigzag_matches_lines"]
    assert m["characteristic_polygon"] == [[0, 0], [2, 0], [0, 1]]
