from typing import Any, List, Literal, Optional

from pydantic import BaseModel, Field

from .common import VertexFunction, VertexSet


class End(BaseModel):
    omega: VertexSet
    representative: Any = Field(..., description="Smallest-id vertex of the component")
    anchor: Any = Field(..., description="Smallest-id vertex of minimal depth in the component")
    component_probe: VertexSet
    touches_probe_sphere: bool = True
    sentinels: List[Any] = Field(default_factory=list, description="Smallest-id vertex at depths p/2, 3p/4, p-1")


class EndsDecomposition(BaseModel):
    omega: VertexSet
    probe_radius: int
    ends: List[End]
    stable: bool
    compared_radius: Optional[int] = None

    @property
    def count(self) -> int:
        return len(self.ends)


class BarrierRow(BaseModel):
    rho: int
    vertex: Any
    value: float


class EndClassification(BaseModel):
    end: End
    verdict: Literal["parabolic", "non-parabolic", "inconclusive"]
    barrier_trace: List[BarrierRow]
    limit_estimate: Optional[float] = None
    drift: Optional[float] = None
    low_confidence: bool = False
    monotone: bool = True
    domination_ratio: Optional[float] = None
    margin: float
    stall_eps: float
    detail: Optional[str] = None


class EndCountRow(BaseModel):
    omega: VertexSet
    probe_radius: int
    N: int
    N0: int = Field(..., description="Non-parabolic ends")
    Nprime: int = Field(..., description="Parabolic ends")
    inconclusive: int
    stable: bool
    classifications: List[EndClassification]


class EndCountReport(BaseModel):
    rows: List[EndCountRow]
    monotone: bool
    N: int
    N0: int
    Nprime: int


class EndSeparatingBasis(BaseModel):
    omega: VertexSet
    rho_green: int
    gram_depth: int
    functions: List[VertexFunction]
    gram_matrix: List[List[float]]
    rank: int
    sup_norms: List[float]
    identity_deviation: Optional[float] = None
    constant: bool = False


class RefinementRow(BaseModel):
    coarse_representative: Any
    coarse_verdict: str
    fine_verdicts: List[str]
    holds: bool


class RefinementReport(BaseModel):
    omega: VertexSet
    omega_prime: VertexSet
    rows: List[RefinementRow]
    holds: bool
