from .config import settings, Settings
from .database import get_engine, init_db, get_session_scope
from .exceptions import (
    CurvGraphError,
    DomainError,
    GraphFormatError,
    PreconditionError,
    IllPosedError,
    NumericError,
    ResourceError,
    IntegrityError,
    UnboundedCurvatureError,
    VerdictFailure,
    UsageError,
)

__all__ = [
    "settings",
    "Settings",
    "get_engine",
    "init_db",
    "get_session_scope",
    "CurvGraphError",
    "DomainError",
    "GraphFormatError",
    "PreconditionError",
    "IllPosedError",
    "NumericError",
    "ResourceError",
    "IntegrityError",
    "UnboundedCurvatureError",
    "VerdictFailure",
    "UsageError",
]
