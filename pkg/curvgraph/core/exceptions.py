from typing import Any, Dict, Optional


class CurvGraphError(Exception):
    """Base error. `exit_code` is what the CLI returns for it."""

    exit_code = 3

    def __init__(self, detail: str, payload: Optional[Dict[str, Any]] = None):
        super().__init__(detail)
        self.detail = detail
        self.payload = payload or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "detail": self.detail, "payload": self.payload}


class DomainError(CurvGraphError):
    exit_code = 2


class GraphFormatError(DomainError):
    def __init__(self, detail: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f"line {line}" if line is not None else "unknown position"
        if line is not None and column is not None:
            where = f"line {line}, column {column}"
        super().__init__(f"{where}: {detail}", {"line": line, "column": column})
        self.line = line
        self.column = column


class PreconditionError(CurvGraphError):
    exit_code = 2


class IllPosedError(CurvGraphError):
    exit_code = 2


class NumericError(CurvGraphError):
    exit_code = 3


class ResourceError(CurvGraphError):
    exit_code = 3


class IntegrityError(CurvGraphError):
    exit_code = 3


class UnboundedCurvatureError(CurvGraphError):
    exit_code = 3


class VerdictFailure(CurvGraphError):
    """A check ran to completion and its verdict is negative."""

    exit_code = 1


class UsageError(CurvGraphError):
    """Command line could not be parsed."""

    exit_code = 2
