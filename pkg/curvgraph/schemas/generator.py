from typing import Any, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class GlueSpec(BaseModel):
    """Two copies of the family identified along the listed base tokens (default: the root)."""

    identify: Optional[List[Any]] = Field(None, description="Base tokens identified across the two copies")


class VertexWeightOverride(BaseModel):
    v: Any
    m: float = Field(..., gt=0)


class EdgeWeightOverride(BaseModel):
    u: Any
    v: Any
    w: float = Field(..., gt=0)


class GeneratorSpec(BaseModel):
    family: Literal["lattice", "tree", "product"]
    d: Optional[int] = Field(None, ge=1, description="Lattice dimension or tree degree")
    factors: Optional[List["GeneratorSpec"]] = Field(None, description="Exactly two factor specs (product only)")
    glue: Optional[GlueSpec] = None
    m: float = Field(1.0, gt=0)
    w: float = Field(1.0, gt=0)
    C: Optional[float] = Field(None, gt=0, description="Declared bounded-geometry constant")
    R_pert: int = Field(8, ge=0, description="Perturbations must lie within this distance of the root")
    perturb_m: List[VertexWeightOverride] = Field(default_factory=list)
    perturb_w: List[EdgeWeightOverride] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_family_fields(self):
        if self.family in ("lattice", "tree") and self.d is None:
            raise ValueError(f"family '{self.family}' requires 'd'")
        if self.family == "tree" and self.d is not None and self.d < 2:
            raise ValueError("tree degree must be at least 2")
        if self.family == "product" and (not self.factors or len(self.factors) != 2):
            raise ValueError("family 'product' requires exactly two 'factors'")
        return self


class DriftSpec(BaseModel):
    """The i-th graph of a sequence carries w(u, v) = base weight + amplitude / i."""

    u: Any
    v: Any
    amplitude: float


class RaySpec(BaseModel):
    start: Any
    step: Any
    copy_index: int = Field(0, ge=0, le=1, alias="copy")
    drift: Optional[DriftSpec] = None

    model_config = {"populate_by_name": True}


class ProbeRule(BaseModel):
    """probe radius = max(minimum, max depth of omega + offset)."""

    offset: int = Field(6, ge=1)
    minimum: int = Field(8, ge=1)


GeneratorSpec.model_rebuild()


class GeometryViolation(BaseModel):
    kind: Literal["degree", "vertex_weight", "edge_weight"]
    witness: List[Any] = Field(..., description="Offending vertex (one entry) or edge (two entries)")
    value: float


class BoundedGeometryReport(BaseModel):
    C: float
    sample_radius: int
    sampled_vertices: int
    max_degree: int
    violations: List[GeometryViolation] = Field(default_factory=list)
    passed: bool
