from fractions import Fraction as F
from itertools import combinations

from hvdimer.hv import linear_hv
from hvdimer.isomorphism import canonical_form, dimer_isomorphic, find_isomorphism
from hvdimer.lattice import GroupMatrix, validate_polygon
from hvdimer.mckay import quiver_tiling
from hvdimer.repro import z3_hexagonal_model


def tiling(rows):
    return quiver_tiling(GroupMatrix.from_rows(rows)).dimer


def test_translate_is_isomorphic():
    g = z3_hexagonal_model()
    assert dimer_isomorphic(g, g.translated((F(1, 5), F(2, 3))))


def test_unit_triangle_output_is_the_unit_hexagon():
    _, (g,) = linear_hv(validate_polygon([(0, 0), (1, 0), (0, 1)]))
    assert dimer_isomorphic(g, tiling([[1, 0], [0, 1]]))


def test_different_sizes():
    assert not dimer_isomorphic(tiling([[2, 1], [1, 2]]), tiling([[2, 1], [1, 3]]))


def test_same_size_different_embedding():
    # both have 5 white nodes; the characteristic polygons are not equivalent
    assert not dimer_isomorphic(tiling([[2, 1], [1, 3]]), tiling([[1, 0], [0, 5]]))


def test_canonical_form_is_relabeling_invariant():
    g = tiling([[2, 1], [1, 3]])
    h = g.translated((F(1, 3), F(1, 7)))
    assert canonical_form(g)[0] == canonical_form(h)[0]
    dart_map, mirror = find_isomorphism(g, h)
    assert not mirror and len(dart_map) == 2 * len(g.edges)


def test_equivalence_relation_on_corpus():
    corpus = [
        tiling([[1, 0], [0, 1]]),
        tiling([[2, 1], [1, 2]]),
        z3_hexagonal_model(),
        tiling([[2, 1], [1, 3]]),
        tiling([[3, 1], [1, 2]]),
        tiling([[1, 0], [0, 5]]),
        linear_hv(validate_polygon([(1, 0), (0, 1), (-1, 0), (-1, -1)]))[1][0],
    ]
    n = len(corpus)
    rel = [[dimer_isomorphic(corpus[i], corpus[j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        assert rel[i][i]
    for i, j in combinations(range(n), 2):
        assert rel[i][j] == rel[j][i]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if rel[i][j] and rel[j][k]:
                    assert rel[i][k]
    assert rel[1][2]  # the Z/3 hexagon from both constructions


def _mirror(g):
    from hvdimer.dimer import DimerModel, Edge, Node

    nodes = tuple(Node(n.color, (-n.pos[0], n.pos[1])) for n in g.nodes)
    shift = [(-1 if n.pos[0] != 0 else 0) for n in g.nodes]  # floor of -x for x in [0, 1)
    edges = tuple(Edge(e.w, e.b, (-e.crossing[0] + shift[e.b] - shift[e.w], e.crossing[1])) for e in g.edges)
    return DimerModel(nodes, edges, tuple(tuple(reversed(r)) for r in g.rotation))


def test_reflection_is_isomorphic():
    _, (g,) = linear_hv(validate_polygon([(1, 0), (0, 1), (-1, 0), (-1, -1)]))
    m = _mirror(g)
    assert dimer_isomorphic(g, m)
