from typing import Any, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from .common import VertexFunction, VertexSet


class BakryEmeryResult(BaseModel):
    vertex: Any
    n_param: float = Field(..., description="Dimension parameter; inf for CD(K, inf)")
    curvature: float = Field(..., description="Largest K with CD(K, n) at the vertex; inf when degenerate")
    witness: VertexFunction = Field(default_factory=dict, description="Near-extremal function on B2(x)")
    tolerance: float
    degenerate: bool = False
    iterations: int = 0


class OllivierResult(BaseModel):
    edge: Tuple[Any, Any]
    kappa: float
    optimizer: VertexFunction
    lp_status: Literal["optimal", "infeasible"]
    duality_gap: float = 0.0
    method: Literal["highs", "exact"] = "highs"


class CurvatureViolation(BaseModel):
    vertex: Optional[Any] = None
    edge: Optional[Tuple[Any, Any]] = None
    value: float


class CurvatureOutsideReport(BaseModel):
    omega: VertexSet
    mode: Literal["bakry-emery", "ollivier"]
    probe_radius: int
    tested: int = Field(..., description="Number of vertices (BE) or edges (Ollivier) evaluated")
    min_value: Optional[float] = None
    violations: List[CurvatureViolation] = Field(default_factory=list)
    passed: bool
