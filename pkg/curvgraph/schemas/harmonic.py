from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from .common import EdgeFunction, VertexFunction, VertexSet
from .curvature import CurvatureOutsideReport


class HarmonicSolution(BaseModel):
    values: VertexFunction
    interior: VertexSet
    boundary: VertexSet
    residual: float = Field(..., description="max |Delta u| over the interior")
    solver_info: Dict[str, Any] = Field(default_factory=dict)


class GradientField(BaseModel):
    vertex_gradient: VertexFunction = Field(..., description="Gamma(u)(x)")
    edge_gradient: EdgeFunction = Field(..., description="|u(x) - u(y)| per edge")


class GradientMaxPrinciple(BaseModel):
    max_interior_pair: Optional[Tuple[Any, Any]]
    max_interior: float
    max_boundary_pair: Optional[Tuple[Any, Any]]
    max_boundary: float
    holds: bool
    curvature_verified: bool
    min_interior_kappa: Optional[float] = None
    advisory: Optional[str] = None


class SubharmonicityRow(BaseModel):
    vertex: Any
    laplacian_of_gamma: float
    negative: bool


class SubharmonicityReport(BaseModel):
    rows: List[SubharmonicityRow]
    flagged: int
    tolerance: float


class GreenRow(BaseModel):
    rho: int
    values: VertexFunction
    sup_increment: Optional[float] = None


class GreenLimitTable(BaseModel):
    source: Any
    window_radius: int
    rows: List[GreenRow]
    verdict: Literal["converged", "growing"]
    stall_eps: float
    truncated: bool = False
    detail: Optional[str] = None


class UniqueContinuationProbe(BaseModel):
    probe_radius: int
    annulus_max_gradient: float
    sphere_max_gradient: float
    holds: bool


class DimensionCertificate(BaseModel):
    x0: Any
    R0: int
    sphere_count: int
    curvature_report: CurvatureOutsideReport
    mode: Literal["bakry-emery", "ollivier"]
    probe_radius: int
    unique_continuation: Optional[UniqueContinuationProbe] = None


class DecayRow(BaseModel):
    r: int
    max_gamma: float
    max_edge_grad: float


class DecayProfile(BaseModel):
    x0: Any
    rows: List[DecayRow]
