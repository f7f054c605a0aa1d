"""
Finite weighted graphs: storage, combinatorial metric, balls and spheres,
vertex boundaries, induced subgraphs and the graph Laplacian.

Ids are any hashable, totally ordered values. Graphs loaded from a JSON file
get dense integer ids assigned in sorted-label order; generated graphs use
coordinate tokens (see generators.py).
"""
import json
import logging
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
from pydantic import ValidationError

from ..core.exceptions import DomainError, GraphFormatError
from ..schemas.graph import GraphFile

logger = logging.getLogger(__name__)

VertexId = Hashable
FunctionOnVertices = Dict[VertexId, float]
Edge = Tuple[VertexId, VertexId]


def label_sort_key(label: Any) -> Tuple[int, Any]:
    # numbers before strings so mixed label sets still sort deterministically
    if isinstance(label, bool):
        return (1, str(label))
    if isinstance(label, (int, float)):
        return (0, label)
    return (1, str(label))


class WeightedGraph:
    """Immutable locally finite simple graph with vertex measure m and edge weights w."""

    def __init__(
        self,
        vertex_weight: Mapping[VertexId, float],
        edges: Iterable[Tuple[VertexId, VertexId, float]],
        labels: Optional[Sequence[Any]] = None,
    ):
        graph = nx.Graph()
        for v in sorted(vertex_weight):
            m = float(vertex_weight[v])
            if not m > 0:
                raise DomainError(f"Vertex {v!r} has non-positive weight {m}.")
            graph.add_node(v, m=m)

        seen = set()
        edge_list = []
        for u, v, w in edges:
            if u == v:
                raise DomainError(f"Self-loop at vertex {u!r}.")
            if u not in graph or v not in graph:
                missing = u if u not in graph else v
                raise DomainError(f"Edge ({u!r}, {v!r}) references unknown vertex {missing!r}.")
            key = (u, v) if u <= v else (v, u)
            if key in seen:
                raise DomainError(f"Duplicate edge {key!r}.")
            w = float(w)
            if not w > 0:
                raise DomainError(f"Edge {key!r} has non-positive weight {w}.")
            seen.add(key)
            edge_list.append((key[0], key[1], w))
        for u, v, w in sorted(edge_list, key=lambda e: (e[0], e[1])):
            graph.add_edge(u, v, w=w)

        self._graph = nx.freeze(graph)
        self._vertices = tuple(graph.nodes)
        self._m = MappingProxyType({v: graph.nodes[v]["m"] for v in self._vertices})
        self._adj = MappingProxyType({
            v: tuple((y, graph.edges[v, y]["w"]) for y in sorted(graph.neighbors(v)))
            for v in self._vertices
        })
        self._labels = tuple(labels) if labels is not None else None
        self._label_index = (
            {str(label): i for i, label in enumerate(self._labels)} if self._labels is not None else None
        )

    # -- basic queries -----------------------------------------------------

    @property
    def vertices(self) -> Tuple[VertexId, ...]:
        return self._vertices

    @property
    def nx_graph(self) -> nx.Graph:
        """Frozen networkx view (node attr `m`, edge attr `w`)."""
        return self._graph

    @property
    def labels(self) -> Optional[Tuple[Any, ...]]:
        return self._labels

    def __contains__(self, v: VertexId) -> bool:
        return v in self._m

    def __len__(self) -> int:
        return len(self._vertices)

    def require(self, *vertices: VertexId) -> None:
        for v in vertices:
            if v not in self._m:
                raise DomainError(f"Unknown vertex {v!r}.", {"vertex": repr(v)})

    def m(self, x: VertexId) -> float:
        self.require(x)
        return self._m[x]

    def w(self, x: VertexId, y: VertexId) -> float:
        self.require(x, y)
        data = self._graph.get_edge_data(x, y)
        if data is None:
            raise DomainError(f"Vertices {x!r} and {y!r} are not adjacent.")
        return data["w"]

    def neighbors(self, x: VertexId) -> Tuple[Tuple[VertexId, float], ...]:
        self.require(x)
        return self._adj[x]

    def adjacent(self, x: VertexId, y: VertexId) -> bool:
        return self._graph.has_edge(x, y)

    def degree(self, x: VertexId) -> int:
        return len(self.neighbors(x))

    def edges(self) -> List[Tuple[VertexId, VertexId, float]]:
        return [(u, v, w) for u in self._vertices for v, w in self._adj[u] if u < v]

    def number_of_edges(self) -> int:
        return self._graph.number_of_edges()

    def is_connected(self) -> bool:
        return len(self._vertices) > 0 and nx.is_connected(self._graph)

    # -- labels of file-loaded graphs -------------------------------------

    def label_of(self, v: VertexId) -> Any:
        if self._labels is None:
            return v
        return self._labels[v]

    def resolve(self, label: Any) -> VertexId:
        """Map a user-facing label (as typed on the command line) to a vertex id."""
        if self._label_index is None:
            if label in self._m:
                return label
            raise DomainError(f"Unknown vertex {label!r}.")
        key = str(label)
        if key not in self._label_index:
            raise DomainError(f"Unknown vertex label {label!r}.")
        return self._label_index[key]

    def __repr__(self):
        return f"<WeightedGraph(vertices={len(self)}, edges={self.number_of_edges()})>"


@dataclass(frozen=True)
class RootedBall:
    graph: WeightedGraph
    root: VertexId
    radius: int
    depth: Mapping[VertexId, int]

    @property
    def vertices(self) -> Tuple[VertexId, ...]:
        return self.graph.vertices

    def sphere(self, r: int) -> FrozenSet[VertexId]:
        return frozenset(v for v, d in self.depth.items() if d == r)

    def restrict(self, r: int) -> "RootedBall":
        if r > self.radius:
            raise DomainError(f"Cannot restrict a radius-{self.radius} ball to radius {r}.")
        return ball(self.graph, self.root, r)

    def interior_margin(self, x: VertexId) -> int:
        """How many more layers around x are guaranteed to be present in the ambient graph."""
        self.graph.require(x)
        return self.radius - self.depth[x]


# -- metric --------------------------------------------------------------------

def distance(g: WeightedGraph, x: VertexId, y: VertexId) -> Union[int, float]:
    g.require(x, y)
    try:
        return nx.shortest_path_length(g.nx_graph, x, y)
    except nx.NetworkXNoPath:
        return math.inf


def distances_from(g: WeightedGraph, x: VertexId, cutoff: Optional[int] = None) -> Dict[VertexId, int]:
    g.require(x)
    return dict(nx.single_source_shortest_path_length(g.nx_graph, x, cutoff=cutoff))


def ball(g: WeightedGraph, x0: VertexId, R: int) -> RootedBall:
    if R < 0:
        raise DomainError(f"Radius must be non-negative, got {R}.")
    depth = distances_from(g, x0, cutoff=R)
    sub = induced_subgraph(g, depth.keys())
    return RootedBall(graph=sub, root=x0, radius=R, depth=MappingProxyType(dict(sorted(depth.items()))))


def sphere(g: WeightedGraph, x0: VertexId, R: int) -> FrozenSet[VertexId]:
    if R < 0:
        raise DomainError(f"Radius must be non-negative, got {R}.")
    depth = distances_from(g, x0, cutoff=R)
    return frozenset(v for v, d in depth.items() if d == R)


# -- boundaries and subgraphs -------------------------------------------------

def exterior_boundary(g: WeightedGraph, K: Iterable[VertexId]) -> FrozenSet[VertexId]:
    K = frozenset(K)
    g.require(*K)
    return frozenset(y for x in K for y, _ in g.neighbors(x) if y not in K)


def closure(g: WeightedGraph, K: Iterable[VertexId]) -> FrozenSet[VertexId]:
    K = frozenset(K)
    return K | exterior_boundary(g, K)


def interior_boundary(g: WeightedGraph, W: Iterable[VertexId]) -> FrozenSet[VertexId]:
    W = frozenset(W)
    g.require(*W)
    return frozenset(x for x in W if any(y not in W for y, _ in g.neighbors(x)))


def induced_subgraph(g: WeightedGraph, S: Iterable[VertexId]) -> WeightedGraph:
    S = frozenset(S)
    g.require(*S)
    edges = [(u, v, w) for u in S for v, w in g.neighbors(u) if v in S and u < v]
    return WeightedGraph({v: g.m(v) for v in S}, edges)


def components(g: WeightedGraph, S: Optional[Iterable[VertexId]] = None) -> List[FrozenSet[VertexId]]:
    """Connected components of the induced subgraph on S, ordered by smallest id."""
    view = g.nx_graph if S is None else g.nx_graph.subgraph(frozenset(S))
    comps = [frozenset(c) for c in nx.connected_components(view)]
    return sorted(comps, key=min)


# -- Laplacian ---------------------------------------------------------------

def laplacian(g: WeightedGraph, f: Mapping[VertexId, float], x: VertexId) -> float:
    g.require(x)
    if x not in f:
        raise DomainError(f"Function undefined at {x!r}.", {"vertex": repr(x)})
    fx = f[x]
    total = 0.0
    for y, w in g.neighbors(x):
        if y not in f:
            raise DomainError(f"Function undefined at {y!r}, a neighbor of {x!r}.", {"vertex": repr(y)})
        total += w * (f[y] - fx)
    return total / g.m(x)


# -- loading -----------------------------------------------------------------

def _element_lines(text: str, key: str) -> List[int]:
    """Line number of each element of the top-level array under `key`."""
    decoder = json.JSONDecoder()
    anchor = text.find(f'"{key}"')
    if anchor < 0:
        return []
    pos = text.find("[", anchor)
    lines = []
    pos += 1
    while pos < len(text):
        while pos < len(text) and text[pos] in " \t\r\n,":
            pos += 1
        if pos >= len(text) or text[pos] == "]":
            break
        lines.append(text.count("\n", 0, pos) + 1)
        _, pos = decoder.raw_decode(text, pos)
    return lines


def parse_graph(text: str) -> WeightedGraph:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphFormatError(f"Malformed JSON: {e.msg}", line=e.lineno, column=e.colno) from e

    try:
        document = GraphFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        loc = first["loc"]
        line = None
        if len(loc) >= 2 and loc[0] in ("vertices", "edges") and isinstance(loc[1], int):
            lines = _element_lines(text, loc[0])
            line = lines[loc[1]] if loc[1] < len(lines) else None
        raise GraphFormatError(f"{'.'.join(str(p) for p in loc)}: {first['msg']}", line=line) from e

    vertex_lines = _element_lines(text, "vertices")
    edge_lines = _element_lines(text, "edges")

    labels = []
    seen_labels = {}
    for i, record in enumerate(document.vertices):
        key = str(record.id)
        if key in seen_labels:
            raise GraphFormatError(f"Duplicate vertex id {record.id!r}.", line=vertex_lines[i])
        seen_labels[key] = record
        labels.append(record.id)
    labels.sort(key=label_sort_key)
    index = {str(label): i for i, label in enumerate(labels)}

    seen_edges = set()
    edges = []
    for i, record in enumerate(document.edges):
        line = edge_lines[i] if i < len(edge_lines) else None
        for end in (record.u, record.v):
            if str(end) not in index:
                raise GraphFormatError(f"Edge endpoint {end!r} is not a declared vertex.", line=line)
        u, v = index[str(record.u)], index[str(record.v)]
        if u == v:
            raise GraphFormatError(f"Self-loop at vertex {record.u!r}.", line=line)
        key = (min(u, v), max(u, v))
        if key in seen_edges:
            raise GraphFormatError(f"Duplicate edge {record.u!r}-{record.v!r}.", line=line)
        seen_edges.add(key)
        edges.append((key[0], key[1], record.w))

    g = WeightedGraph({index[str(r.id)]: r.m for r in document.vertices}, edges, labels=labels)
    logger.info(f"Loaded graph with {len(g)} vertices and {g.number_of_edges()} edges.")
    return g


def load_graph(path: str) -> WeightedGraph:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        raise GraphFormatError(f"Cannot read graph file {path}: {e}") from e
    return parse_graph(text)


def from_networkx(graph: nx.Graph, m: float = 1.0, w: float = 1.0) -> WeightedGraph:
    """Wrap a networkx graph; `m`/`w` attributes override the defaults."""
    weights = {v: graph.nodes[v].get("m", m) for v in graph.nodes}
    edges = [(u, v, data.get("w", w)) for u, v, data in graph.edges(data=True)]
    return WeightedGraph(weights, edges)
