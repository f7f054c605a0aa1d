import json

import networkx as nx
import numpy as np
import pytest

from curvgraph.services.generators import glued_lattice, lattice
from curvgraph.services.graph_core import WeightedGraph, from_networkx


def unit_graph(edges, vertices=None):
    vertices = sorted({v for e in edges for v in e} | set(vertices or ()))
    return WeightedGraph({v: 1.0 for v in vertices}, [(u, v, 1.0) for u, v in edges])


def random_weighted_graph(rng, n, p=0.4, low=0.5, high=2.0):
    """Connected G(n, p) sample with vertex and edge weights uniform in [low, high]."""
    while True:
        G = nx.gnp_random_graph(n, p, seed=int(rng.integers(0, 2**31)))
        if nx.is_connected(G):
            break
    for v in sorted(G.nodes):
        G.nodes[v]["m"] = float(rng.uniform(low, high))
    for a, b in sorted(G.edges):
        G.edges[a, b]["w"] = float(rng.uniform(low, high))
    return from_networkx(G)


def write_json(path, data):
    path.write_text(json.dumps(data, indent=2))
    return str(path)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def single_edge():
    return unit_graph([(0, 1)])


@pytest.fixture
def triangle():
    return unit_graph([(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def square():
    return unit_graph([(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def path11():
    return unit_graph([(i, i + 1) for i in range(10)])


@pytest.fixture
def z1():
    return lattice(1)


@pytest.fixture
def z2():
    return lattice(2)


@pytest.fixture
def glued_z2():
    return glued_lattice(2)
