import math

import pytest

from curvgraph.core.exceptions import DomainError, GraphFormatError
from curvgraph.services.graph_core import (
    WeightedGraph,
    ball,
    closure,
    components,
    distance,
    exterior_boundary,
    interior_boundary,
    laplacian,
    load_graph,
    parse_graph,
    sphere,
)

from .conftest import random_weighted_graph, unit_graph

GRAPH_TEXT = """{
  "vertices": [
    {"id": "b", "m": 2.0},
    {"id": "a"},
    {"id": "c"}
  ],
  "edges": [
    {"u": "a", "v": "b", "w": 3.0},
    {"u": "b", "v": "c"}
  ]
}"""


def test_parse_graph_assigns_dense_ids_in_label_order():
    g = parse_graph(GRAPH_TEXT)
    assert g.labels == ("a", "b", "c")
    assert g.vertices == (0, 1, 2)
    assert g.resolve("b") == 1
    assert g.label_of(2) == "c"
    assert g.m(1) == 2.0
    assert g.m(0) == 1.0
    assert g.w(0, 1) == 3.0
    assert g.w(1, 2) == 1.0


def test_numeric_labels_sort_before_strings():
    text = '{"vertices": [{"id": "x"}, {"id": 10}, {"id": 2}], "edges": [{"u": 2, "v": 10}]}'
    g = parse_graph(text)
    assert g.labels == (2, 10, "x")
    assert g.resolve("10") == 1
    assert g.degree(2) == 0


def test_malformed_json_reports_line_and_column():
    with pytest.raises(GraphFormatError) as info:
        parse_graph('{\n  "vertices": [\n    {"id": 1,}\n  ]\n}')
    assert info.value.line == 3
    assert info.value.column is not None
    assert info.value.exit_code == 2


@pytest.mark.parametrize(
    "edges, message",
    [
        ('{"u": "a", "v": "a"}', "Self-loop"),
        ('{"u": "a", "v": "b"}, {"u": "b", "v": "a"}', "Duplicate edge"),
        ('{"u": "a", "v": "z"}', "not a declared vertex"),
        ('{"u": "a", "v": "b", "w": 0}', "greater than 0"),
    ],
)
def test_semantic_errors_carry_the_record_line(edges, message):
    text = '{\n"vertices": [{"id": "a"}, {"id": "b"}],\n"edges": [\n' + edges + "\n]\n}"
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text)
    assert message in str(info.value)
    assert info.value.line == 4


def test_duplicate_vertex_id():
    text = '{"vertices": [{"id": 1}, {"id": 1}], "edges": []}'
    with pytest.raises(GraphFormatError, match="Duplicate vertex id"):
        parse_graph(text)


def test_load_graph_missing_file(tmp_path):
    with pytest.raises(GraphFormatError, match="Cannot read"):
        load_graph(str(tmp_path / "absent.json"))


def test_weighted_graph_rejects_bad_input():
    with pytest.raises(DomainError):
        WeightedGraph({0: 1.0}, [(0, 0, 1.0)])
    with pytest.raises(DomainError):
        WeightedGraph({0: 1.0, 1: -1.0}, [])
    with pytest.raises(DomainError):
        WeightedGraph({0: 1.0, 1: 1.0}, [(0, 1, 1.0), (1, 0, 1.0)])
    with pytest.raises(DomainError):
        WeightedGraph({0: 1.0}, [(0, 5, 1.0)])


def test_neighbors_are_sorted_and_symmetric():
    g = unit_graph([(2, 0), (0, 1), (1, 2), (0, 3)])
    assert [y for y, _ in g.neighbors(0)] == [1, 2, 3]
    assert [(u, v) for u, v, _ in g.edges()] == [(0, 1), (0, 2), (0, 3), (1, 2)]
    for u, v, w in g.edges():
        assert g.w(u, v) == g.w(v, u) == w


def test_metric_balls_and_spheres(path11):
    assert distance(path11, 0, 10) == 10
    b = ball(path11, 5, 2)
    assert set(b.vertices) == {3, 4, 5, 6, 7}
    assert b.sphere(2) == frozenset({3, 7})
    assert sphere(path11, 0, 3) == frozenset({3})
    assert b.interior_margin(4) == 1
    assert set(b.restrict(1).vertices) == {4, 5, 6}


def test_distance_between_components_is_infinite():
    g = unit_graph([(0, 1), (2, 3)])
    assert math.isinf(distance(g, 0, 3))
    assert components(g) == [frozenset({0, 1}), frozenset({2, 3})]
    assert not g.is_connected()


def test_boundaries(path11):
    K = {3, 4, 5}
    assert exterior_boundary(path11, K) == frozenset({2, 6})
    assert closure(path11, K) == frozenset({2, 3, 4, 5, 6})
    assert interior_boundary(path11, K) == frozenset({3, 5})
    assert components(path11, {0, 1, 5, 6, 9}) == [frozenset({0, 1}), frozenset({5, 6}), frozenset({9})]


def test_laplacian_uses_vertex_measure():
    g = WeightedGraph({0: 2.0, 1: 1.0, 2: 1.0}, [(0, 1, 1.0), (0, 2, 3.0)])
    f = {0: 1.0, 1: 2.0, 2: 0.0}
    assert laplacian(g, f, 0) == pytest.approx((1.0 * 1.0 + 3.0 * -1.0) / 2.0)
    with pytest.raises(DomainError):
        laplacian(g, {0: 1.0, 1: 2.0}, 0)


def test_summation_by_parts(rng):
    for _ in range(10):
        g = random_weighted_graph(rng, int(rng.integers(4, 12)))
        f = {v: float(rng.normal()) for v in g.vertices}
        h = {v: float(rng.normal()) for v in g.vertices}
        lhs = sum(g.m(x) * laplacian(g, f, x) * h[x] for x in g.vertices)
        rhs = -sum(w * (f[v] - f[u]) * (h[v] - h[u]) for u, v, w in g.edges())
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_distance_is_a_metric(rng):
    g = random_weighted_graph(rng, 10, p=0.3)
    vertices = g.vertices
    for x in vertices:
        assert distance(g, x, x) == 0
        for y in vertices:
            dxy = distance(g, x, y)
            assert dxy == distance(g, y, x)
            for z in vertices:
                assert distance(g, x, z) <= dxy + distance(g, y, z)


def test_ball_is_disjoint_union_of_spheres(z2):
    R = 5
    b = z2.materialize_ball(z2.root, R)
    layers = [b.sphere(r) for r in range(R + 1)]
    assert sum(len(layer) for layer in layers) == len(b.vertices)
    assert frozenset().union(*layers) == frozenset(b.vertices)
    assert [len(layer) for layer in layers] == [1, 4, 8, 12, 16, 20]
    for r in range(1, R + 1):
        assert sphere(b.graph, z2.root, r) == layers[r]
