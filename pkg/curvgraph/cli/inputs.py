"""
Argument parsing helpers shared by the command modules: graph sources,
vertex and edge literals, vertex sets, functions and integer lists.
"""
import argparse
import json
from typing import Any, Dict, FrozenSet, List, Optional, Tuple, Union

from ..core.exceptions import DomainError
from ..schemas import RaySpec
from ..services.generators import GraphGenerator, RootedGeneratorSequence, as_token, load_generator
from ..services.graph_core import WeightedGraph, load_graph

Source = Union[WeightedGraph, GraphGenerator]


def add_source_arguments(parser: argparse.ArgumentParser, graph: bool = True, gen: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    if graph:
        group.add_argument("--graph", help="Finite weighted graph in JSON format")
    if gen:
        group.add_argument("--gen", help="Generator spec in JSON format")


def _read_json(path: str, what: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as e:
        raise DomainError(f"Cannot read {what} file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DomainError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}", {"line": e.lineno}) from e


def load_source(args: argparse.Namespace) -> Source:
    """Graph or generator named on the command line.

    File graphs record their id -> label table on `args.vertex_labels` so
    the report can carry it.
    """
    if getattr(args, "graph", None):
        g = load_graph(args.graph)
        if g.labels is not None:
            args.vertex_labels = [[i, label] for i, label in enumerate(g.labels)]
        return g
    return load_generator(args.gen)


def parse_vertex(text: str, source: Source) -> Any:
    if isinstance(source, WeightedGraph):
        return source.resolve(text)
    try:
        token = as_token(json.loads(text))
    except json.JSONDecodeError:
        token = text
    source.require(token)
    return token


def parse_edge(text: str, source: Source) -> Tuple[Any, Any]:
    """`u,v` with labels, or two JSON tokens such as `[0,0],[1,0]`."""
    parts: Optional[List[Any]] = None
    try:
        decoded = json.loads(f"[{text}]")
        if len(decoded) == 2:
            parts = [json.dumps(p) if not isinstance(p, str) else p for p in decoded]
    except json.JSONDecodeError:
        pass
    if parts is None:
        parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"An edge is written u,v; got {text!r}.")
    return parse_vertex(parts[0], source), parse_vertex(parts[1], source)


def _resolve_all(items: List[Any], source: Source) -> List[Any]:
    if isinstance(source, WeightedGraph):
        return [source.resolve(v) for v in items]
    tokens = [as_token(v) for v in items]
    source.require(*tokens)
    return tokens


def load_vertex_set(path: str, source: Source) -> FrozenSet[Any]:
    data = _read_json(path, "vertex set")
    if isinstance(data, dict):
        data = data.get("omega", data.get("vertices"))
    if not isinstance(data, list):
        raise DomainError(f"{path} must hold a JSON list of vertices.")
    return frozenset(_resolve_all(data, source))


def load_function(path: str, source: Source) -> Dict[Any, float]:
    """Either [{"vertex": v, "value": x}, ...] or, for labelled graphs, {label: x}."""
    data = _read_json(path, "function")
    if isinstance(data, dict) and "values" in data:
        data = data["values"]
    if isinstance(data, dict):
        pairs = list(data.items())
    elif isinstance(data, list):
        try:
            pairs = [(item["vertex"], item["value"]) for item in data]
        except (KeyError, TypeError) as e:
            raise DomainError(f"{path}: function entries need 'vertex' and 'value'.") from e
    else:
        raise DomainError(f"{path} must hold a function on vertices.")
    vertices = _resolve_all([v for v, _ in pairs], source)
    return {v: float(x) for v, (_, x) in zip(vertices, pairs)}


def load_boundary_problem(path: str, g: WeightedGraph) -> Tuple[Optional[FrozenSet[Any]], Dict[Any, float]]:
    """{"boundary": <function>, "interior": [labels]?}. Without an interior every other vertex is one."""
    data = _read_json(path, "boundary")
    if isinstance(data, dict) and "boundary" in data:
        raw, interior = data["boundary"], data.get("interior")
    else:
        raw, interior = data, None
    if isinstance(raw, dict):
        pairs = list(raw.items())
    else:
        pairs = [(item["vertex"], item["value"]) for item in raw]
    boundary = {g.resolve(v): float(x) for v, x in pairs}
    if interior is not None:
        interior = frozenset(g.resolve(v) for v in interior)
    return interior, boundary


def load_ray(path: str) -> RaySpec:
    data = _read_json(path, "ray")
    return RaySpec.model_validate(data)


def load_sequence(args: argparse.Namespace) -> RootedGeneratorSequence:
    return RootedGeneratorSequence(load_generator(args.gen), load_ray(args.roots))


def int_list(text: str) -> List[int]:
    """`4,6,8` or an inclusive range `4..12`."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from e


def dimension(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return float("inf")
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("the dimension parameter must be positive")
    return value
