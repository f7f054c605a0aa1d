from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator


class RunConfig(BaseModel):
    """Validated view of one CLI invocation."""

    group: str
    command: str
    output_format: Literal["json", "csv"] = "json"
    out: Optional[str] = None
    budget: int = Field(..., gt=0)
    workers: int = Field(1, gt=0)
    seed: int = 0
    json_errors: bool = False
    tol: Optional[float] = Field(None, gt=0)
    eps: Optional[float] = Field(None, gt=0)
    margin: Optional[float] = Field(None, gt=0, lt=1)
    stall_eps: Optional[float] = Field(None, gt=0)
    schedule: Optional[List[int]] = None
    indices: Optional[List[int]] = None

    @field_validator("schedule", "indices")
    @classmethod
    def strictly_increasing(cls, value):
        if value is None:
            return value
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError(f"must be strictly increasing, got {value}")
        if any(v < 0 for v in value):
            raise ValueError(f"must be non-negative, got {value}")
        return value
