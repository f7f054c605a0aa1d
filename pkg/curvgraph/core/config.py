from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Vertex budget per materialized ball (CURVGRAPH_BUDGET)
    BUDGET: int = Field(200_000, gt=0)

    # Numerical tolerances
    BE_TOL: float = Field(1e-8, gt=0)
    BE_BRACKET_LIMIT: float = Field(1e6, gt=0)
    LP_TOL: float = Field(1e-9, gt=0)
    HARMONIC_RESIDUAL: float = Field(1e-8, gt=0)
    CG_RTOL: float = Field(1e-10, gt=0)
    DENSE_CUTOFF: int = Field(500, gt=0)

    # Guard for the rooted isomorphism search
    ISO_NODE_BUDGET: int = Field(2_000_000, gt=0)

    WORKERS: int = Field(1, gt=0)
    LOG_LEVEL: str = "WARNING"

    # Run ledger; disabled when unset
    LEDGER_URL: Optional[str] = None

    model_config = SettingsConfigDict(
        env_prefix="CURVGRAPH_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()
