from typing import List, Union

from pydantic import BaseModel, Field

Label = Union[int, str]


class VertexRecord(BaseModel):
    id: Label = Field(..., description="User-facing vertex label")
    m: float = Field(1.0, gt=0, description="Vertex measure")


class EdgeRecord(BaseModel):
    u: Label
    v: Label
    w: float = Field(1.0, gt=0, description="Edge weight")


class GraphFile(BaseModel):
    vertices: List[VertexRecord]
    edges: List[EdgeRecord] = Field(default_factory=list)
