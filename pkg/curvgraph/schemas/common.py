"""Annotated types shared by the report schemas.

Vertex ids are arbitrary hashables (ints for file graphs, nested tuples for
generated graphs). In python mode the dicts and sets below keep their native
shape; `model_dump(mode="json")` turns them into sorted lists so reports are
deterministic.
"""
from typing import Annotated, Any, Dict, FrozenSet, Iterable, List, Tuple

from pydantic import PlainSerializer


def jsonable_vertex(v: Any) -> Any:
    if isinstance(v, (tuple, list)):
        return [jsonable_vertex(x) for x in v]
    return v


def sorted_vertices(vertices: Iterable[Any]) -> List[Any]:
    items = list(vertices)
    try:
        return sorted(items)
    except TypeError:
        return sorted(items, key=repr)


def _serialize_vertex_map(values: Dict[Any, float]) -> List[Dict[str, Any]]:
    return [{"vertex": jsonable_vertex(v), "value": values[v]} for v in sorted_vertices(values)]


def _serialize_vertex_set(vertices: FrozenSet[Any]) -> List[Any]:
    return [jsonable_vertex(v) for v in sorted_vertices(vertices)]


def _serialize_edge_map(values: Dict[Tuple[Any, Any], float]) -> List[Dict[str, Any]]:
    return [
        {"u": jsonable_vertex(e[0]), "v": jsonable_vertex(e[1]), "value": values[e]}
        for e in sorted_vertices(values)
    ]


VertexFunction = Annotated[Dict[Any, float], PlainSerializer(_serialize_vertex_map, when_used="json")]
VertexSet = Annotated[FrozenSet[Any], PlainSerializer(_serialize_vertex_set, when_used="json")]
EdgeFunction = Annotated[Dict[Tuple[Any, Any], float], PlainSerializer(_serialize_edge_map, when_used="json")]

TESTED_INDICES_CAVEAT = (
    "Only the listed indices were tested; convergence for all larger indices is not certified."
)


def _serialize_vertex_mapping(mapping: Dict[Any, Any]) -> List[List[Any]]:
    return [[jsonable_vertex(k), jsonable_vertex(mapping[k])] for k in sorted_vertices(mapping)]


VertexMapping = Annotated[Dict[Any, Any], PlainSerializer(_serialize_vertex_mapping, when_used="json")]
