from typing import Any, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .common import TESTED_INDICES_CAVEAT, EdgeFunction, VertexFunction, VertexMapping


class RootedIsomorphism(BaseModel):
    mapping: VertexMapping
    source_root: Any
    target_root: Any

    def inverse(self) -> "RootedIsomorphism":
        return RootedIsomorphism(
            mapping={v: k for k, v in self.mapping.items()},
            source_root=self.target_root,
            target_root=self.source_root,
        )


class DeviationRow(BaseModel):
    index: int
    isomorphic: bool
    vertex_deviation: Optional[float] = None
    edge_deviation: Optional[float] = None

    @property
    def deviation(self) -> Optional[float]:
        if self.vertex_deviation is None:
            return None
        return max(self.vertex_deviation, self.edge_deviation or 0.0)


class ConvergenceReport(BaseModel):
    radius: int
    tested_indices: List[int]
    stabilization_index: Optional[int] = None
    weight_sup_deviation: List[DeviationRow]
    eps: float
    verdict: Literal["converged", "not-stabilized", "weights-diverge"]
    caveat: str = TESTED_INDICES_CAVEAT


class LimitBall(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    ball: Any = Field(..., exclude=True, description="RootedBall carrying the tail-representative weights")
    root: Any
    radius: int
    vertex_weights: VertexFunction
    edge_weights: EdgeFunction
    provenance: List[int]
    caveat: str = TESTED_INDICES_CAVEAT


class FunctionDeviationRow(BaseModel):
    index: int
    deviation: float


class FunctionConvergenceReport(BaseModel):
    radius: int
    tested_indices: List[int]
    rows: List[FunctionDeviationRow]
    eps: float
    verdict: Literal["converged", "diverges"]
    caveat: str = TESTED_INDICES_CAVEAT


class SemicontinuityRow(BaseModel):
    index: int
    curvature: float


class SemicontinuityReport(BaseModel):
    mode: Literal["bakry-emery", "ollivier"]
    tested_indices: List[int]
    rows: List[SemicontinuityRow]
    limit_curvature: float
    tail_min: float
    tolerance: float
    holds: bool
    caveat: str = TESTED_INDICES_CAVEAT
