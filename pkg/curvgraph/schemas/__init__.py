from .curvature import BakryEmeryResult, CurvatureOutsideReport, CurvatureViolation, OllivierResult
from .ends import (
    BarrierRow,
    End,
    EndClassification,
    EndCountReport,
    EndCountRow,
    EndsDecomposition,
    EndSeparatingBasis,
    RefinementReport,
    RefinementRow,
)
from .generator import (
    BoundedGeometryReport,
    DriftSpec,
    GeneratorSpec,
    GeometryViolation,
    GlueSpec,
    ProbeRule,
    RaySpec,
)
from .gh import (
    ConvergenceReport,
    DeviationRow,
    FunctionConvergenceReport,
    FunctionDeviationRow,
    LimitBall,
    RootedIsomorphism,
    SemicontinuityReport,
    SemicontinuityRow,
)
from .graph import EdgeRecord, GraphFile, VertexRecord
from .harmonic import (
    DecayProfile,
    DecayRow,
    DimensionCertificate,
    GradientField,
    GradientMaxPrinciple,
    GreenLimitTable,
    GreenRow,
    HarmonicSolution,
    SubharmonicityReport,
    SubharmonicityRow,
    UniqueContinuationProbe,
)
from .run_config import RunConfig

__all__ = [
    "BakryEmeryResult",
    "CurvatureOutsideReport",
    "CurvatureViolation",
    "OllivierResult",
    "BarrierRow",
    "End",
    "EndClassification",
    "EndCountReport",
    "EndCountRow",
    "EndsDecomposition",
    "EndSeparatingBasis",
    "RefinementReport",
    "RefinementRow",
    "BoundedGeometryReport",
    "DriftSpec",
    "GeneratorSpec",
    "GeometryViolation",
    "GlueSpec",
    "ProbeRule",
    "RaySpec",
    "ConvergenceReport",
    "DeviationRow",
    "FunctionConvergenceReport",
    "FunctionDeviationRow",
    "LimitBall",
    "RootedIsomorphism",
    "SemicontinuityReport",
    "SemicontinuityRow",
    "EdgeRecord",
    "GraphFile",
    "VertexRecord",
    "DecayProfile",
    "DecayRow",
    "DimensionCertificate",
    "GradientField",
    "GradientMaxPrinciple",
    "GreenLimitTable",
    "GreenRow",
    "HarmonicSolution",
    "SubharmonicityReport",
    "SubharmonicityRow",
    "UniqueContinuationProbe",
    "RunConfig",
]
