import itertools
import math

import networkx as nx
import numpy as np
import pytest
from scipy import linalg

from curvgraph.core.exceptions import DomainError, PreconditionError
from curvgraph.services.curvature import (
    BAKRY_EMERY,
    OLLIVIER,
    bakry_emery_curvature,
    bakry_emery_sweep,
    be_quadratic_forms,
    cd_check,
    curvature_outside,
    gamma,
    gamma2,
    ollivier_curvature,
    ollivier_sweep,
)
from curvgraph.services.graph_core import WeightedGraph, from_networkx

from .conftest import random_weighted_graph, unit_graph

ORACLE_CORPUS = {
    "edge": nx.path_graph(2),
    "path": nx.path_graph(5),
    "C3": nx.cycle_graph(3),
    "C4": nx.cycle_graph(4),
    "C5": nx.cycle_graph(5),
    "K4": nx.complete_graph(4),
    "star": nx.star_graph(4),
    "cube": nx.hypercube_graph(3),
}


def lipschitz_oracle(G, x, y):
    """Minimum of Delta f(x) - Delta f(y) over integer 1-Lipschitz f on B1(x) u B1(y), f(x)=0, f(y)=1."""
    N = sorted({x, y} | set(G[x]) | set(G[y]))
    free = [v for v in N if v not in (x, y)]
    dist = dict(nx.all_pairs_shortest_path_length(G))
    best = math.inf
    for values in itertools.product(range(-2, 3), repeat=len(free)):
        f = {x: 0, y: 1, **dict(zip(free, values))}
        if any(abs(f[u] - f[v]) > dist[u][v] for u in N for v in N):
            continue
        lap_x = sum(f[z] - f[x] for z in G[x])
        lap_y = sum(f[z] - f[y] for z in G[y])
        best = min(best, lap_x - lap_y)
    return best


@pytest.mark.parametrize("name", sorted(ORACLE_CORPUS))
def test_ollivier_matches_lipschitz_enumeration(name):
    G = ORACLE_CORPUS[name]
    g = from_networkx(G)
    for result in ollivier_sweep(g):
        u, v = result.edge
        assert result.lp_status == "optimal"
        assert abs(result.kappa - lipschitz_oracle(G, u, v)) <= 1e-9


@pytest.mark.parametrize("name", sorted(ORACLE_CORPUS))
def test_exact_simplex_agrees_with_highs(name):
    g = from_networkx(ORACLE_CORPUS[name])
    for fast, exact in zip(ollivier_sweep(g), ollivier_sweep(g, exact=True)):
        assert exact.method == "exact"
        assert abs(fast.kappa - exact.kappa) <= 1e-9


@pytest.mark.parametrize(
    "graph, edge, kappa",
    [
        (nx.path_graph(2), (0, 1), 2.0),
        (nx.cycle_graph(3), (0, 1), 3.0),
        (nx.cycle_graph(4), (0, 1), 2.0),
    ],
)
def test_pinned_ollivier_values(graph, edge, kappa):
    result = ollivier_curvature(from_networkx(graph), *edge)
    assert result.kappa == pytest.approx(kappa, abs=1e-9)
    assert result.optimizer[edge[0]] == 0.0
    assert result.optimizer[edge[1]] == pytest.approx(1.0)
    assert result.duality_gap < 1e-8


def test_lattice_edge_is_flat(z1, z2):
    b1 = z1.materialize_ball((0,), 3)
    assert ollivier_curvature(b1, (0,), (1,)).kappa == pytest.approx(0.0, abs=1e-9)
    b2 = z2.materialize_ball((0, 0), 3)
    assert ollivier_curvature(b2, (0, 0), (1, 0)).kappa == pytest.approx(0.0, abs=1e-9)


def test_ollivier_rejects_non_edges_and_shallow_balls(z2, square):
    with pytest.raises(DomainError):
        ollivier_curvature(square, 0, 2)
    with pytest.raises(PreconditionError):
        ollivier_curvature(z2.materialize_ball((0, 0), 2), (0, 0), (1, 0))


def test_gamma_forms(triangle):
    f = {0: 0.0, 1: 1.0, 2: 3.0}
    assert gamma(triangle, f, 0) == pytest.approx((1.0 + 9.0) / 2.0)
    h = {0: 1.0, 1: 1.0, 2: 1.0}
    assert gamma(triangle, f, 0, h) == 0.0
    assert gamma2(triangle, h, 0) == pytest.approx(0.0)


def test_gamma_calculus_is_bilinear(rng):
    g = random_weighted_graph(rng, 9)
    x = 0
    f, h, k = ({v: float(rng.normal()) for v in g.vertices} for _ in range(3))
    a, b = 1.7, -0.4
    mix = {v: a * f[v] + b * k[v] for v in g.vertices}
    plus = {v: f[v] + h[v] for v in g.vertices}
    minus = {v: f[v] - h[v] for v in g.vertices}
    for form in (gamma, gamma2):
        assert form(g, f, x, h) == pytest.approx(form(g, h, x, f), abs=1e-10)
        assert form(g, mix, x, h) == pytest.approx(a * form(g, f, x, h) + b * form(g, k, x, h), abs=1e-10)
        polarized = (form(g, plus, x) - form(g, minus, x)) / 4.0
        assert form(g, f, x, h) == pytest.approx(polarized, abs=1e-10)


def test_quadratic_forms_reproduce_gamma_and_gamma2(rng):
    for _ in range(10):
        g = random_weighted_graph(rng, int(rng.integers(3, 11)))
        x = int(rng.integers(0, len(g)))
        order, Q2, Q1 = be_quadratic_forms(g, x)
        f = {v: float(rng.normal()) for v in g.vertices}
        vec = np.array([f[v] for v in order])
        laplacian_f = {v: sum(w * (f[y] - f[v]) for y, w in g.neighbors(v)) / g.m(v) for v in g.vertices}
        gamma_f = {v: gamma(g, f, v) for v in g.vertices}
        identity = 0.5 * sum(w * (gamma_f[y] - gamma_f[x]) for y, w in g.neighbors(x)) / g.m(x)
        identity -= gamma(g, f, x, laplacian_f)
        assert vec @ Q2 @ vec == pytest.approx(gamma2(g, f, x), abs=1e-9)
        assert gamma2(g, f, x) == pytest.approx(identity, abs=1e-9)
        assert vec @ Q1 @ vec == pytest.approx(gamma(g, f, x), abs=1e-9)


@pytest.mark.parametrize("lam", [0.25, 2.0, 3.7])
def test_bakry_emery_scales_with_edge_weights(rng, lam):
    g = random_weighted_graph(rng, 8)
    scaled = WeightedGraph({v: g.m(v) for v in g.vertices}, [(u, v, lam * w) for u, v, w in g.edges()])
    for x in (0, 3):
        K = bakry_emery_curvature(g, x).curvature
        assert bakry_emery_curvature(scaled, x).curvature == pytest.approx(lam * K, abs=1e-6)


def test_cd_check_on_single_edge(single_edge):
    assert cd_check(single_edge, 0, 2.0)
    assert not cd_check(single_edge, 0, 2.1)
    assert cd_check(single_edge, 0, 0.0)


def test_single_edge_bakry_emery(single_edge):
    result = bakry_emery_curvature(single_edge, 0)
    assert result.curvature == pytest.approx(2.0, abs=1e-8)
    assert not result.degenerate
    assert result.witness[0] == 0.0


def test_isolated_vertex_is_degenerate():
    g = unit_graph([(0, 1)], vertices=[2])
    result = bakry_emery_curvature(g, 2)
    assert result.degenerate
    assert math.isinf(result.curvature)


def test_lattice_bakry_emery_is_zero(z2):
    b = z2.materialize_ball((0, 0), 2)
    assert bakry_emery_curvature(b, (0, 0)).curvature == pytest.approx(0.0, abs=1e-7)


def test_dimension_parameter_lowers_curvature(single_edge):
    infinite = bakry_emery_curvature(single_edge, 0).curvature
    finite = bakry_emery_curvature(single_edge, 0, n=2).curvature
    assert finite < infinite
    with pytest.raises(DomainError):
        bakry_emery_curvature(single_edge, 0, n=0)


def gamma2_oracle(g, x, n=math.inf):
    """K_n(x) from the Schur complement of the Gamma_2 form over S_2(x) and a generalized eigensolve."""
    depth = nx.single_source_shortest_path_length(g.nx_graph, x, cutoff=2)
    s1 = sorted(v for v, d in depth.items() if d == 1)
    s2 = sorted(v for v, d in depth.items() if d == 2)
    order = s1 + s2
    basis = {v: {u: float(u == v) for u in g.vertices} for v in order}
    lap_row = np.array([g.w(x, v) / g.m(x) for v in s1])
    Q2 = np.array([[gamma2(g, basis[a], x, basis[b]) for b in order] for a in order])
    Q2[: len(s1), : len(s1)] -= np.outer(lap_row, lap_row) / n if not math.isinf(n) else 0.0
    Q1 = np.array([[gamma(g, basis[a], x, basis[b]) for b in s1] for a in s1])
    k = len(s1)
    A, B, C = Q2[:k, :k], Q2[:k, k:], Q2[k:, k:]
    schur = A - B @ np.linalg.solve(C, B.T) if s2 else A
    return float(linalg.eigh(schur, Q1, eigvals_only=True)[0])


def test_bakry_emery_matches_generalized_eigenvalue_oracle(rng):
    for _ in range(50):
        g = random_weighted_graph(rng, int(rng.integers(3, 13)))
        x = int(rng.integers(0, len(g)))
        expected = gamma2_oracle(g, x)
        assert bakry_emery_curvature(g, x).curvature == pytest.approx(expected, abs=1e-6)


def test_bakry_emery_oracle_with_finite_dimension(rng):
    for _ in range(10):
        g = random_weighted_graph(rng, 6)
        assert bakry_emery_curvature(g, 0, n=3).curvature == pytest.approx(gamma2_oracle(g, 0, n=3), abs=1e-6)


def test_cd_check_is_monotone_in_K(rng):
    for _ in range(10):
        g = random_weighted_graph(rng, 8)
        K = bakry_emery_curvature(g, 0).curvature
        grid = [K - 2.0, K - 0.5, K - 1e-4, K + 1e-4, K + 0.5, K + 2.0]
        verdicts = [cd_check(g, 0, k) for k in grid]
        assert verdicts == sorted(verdicts, reverse=True)
        assert verdicts[2] and not verdicts[3]


def test_sweeps_keep_input_order(square):
    results = bakry_emery_sweep(square, workers=3)
    assert [r.vertex for r in results] == [0, 1, 2, 3]
    edges = ollivier_sweep(square, workers=3)
    assert [r.edge for r in edges] == [(0, 1), (0, 3), (1, 2), (2, 3)]


def test_curvature_outside_on_glued_plane(glued_z2):
    glue = glued_z2.root
    everywhere = curvature_outside(glued_z2, set(), OLLIVIER, 4)
    assert not everywhere.passed
    assert any(glue in v.edge and v.value < 0 for v in everywhere.violations)

    outside = curvature_outside(glued_z2, {glue}, OLLIVIER, 4)
    assert outside.passed
    assert outside.min_value >= -1e-9
    assert outside.tested > 0


def test_curvature_outside_bakry_emery_on_lattice(z2):
    report = curvature_outside(z2, {(0, 0)}, BAKRY_EMERY, 2)
    assert report.passed
    assert report.tested == 12
