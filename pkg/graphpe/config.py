from __future__ import annotations

from functools import lru_cache

from pydantic import ConfigDict, Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Runtime configuration loaded from environment variables."""

    log_level: str = Field("INFO", alias="GRAPHPE_LOG_LEVEL")
    log_json: bool = Field(
        True,
        alias="GRAPHPE_LOG_JSON",
        description="Emit log records as JSON lines on stderr.",
    )

    dense_threshold: float = Field(
        0.25,
        alias="GRAPHPE_DENSE_THRESHOLD",
        description="Adjacency density at or above which graphs are stored dense.",
    )
    max_embedding_dim: int = Field(
        12,
        alias="GRAPHPE_MAX_EMBEDDING_DIM",
        description="Largest m whose m! still fits the 64-bit pattern codes.",
    )
    divergence_bound: float = Field(
        1e10,
        alias="GRAPHPE_DIVERGENCE_BOUND",
        description="Absolute state value treated as an escaped orbit.",
    )
    sweep_workers: int = Field(
        1,
        alias="GRAPHPE_SWEEP_WORKERS",
        description="Concurrent grid points evaluated by repro sweeps.",
    )

    # Lorenz repro defaults (RK4 step, samples, dropped transient)
    lorenz_dt: float = Field(0.01, alias="GRAPHPE_LORENZ_DT")
    lorenz_steps: int = Field(15000, alias="GRAPHPE_LORENZ_STEPS")
    lorenz_transient: int = Field(5000, alias="GRAPHPE_LORENZ_TRANSIENT")

    model_config = ConfigDict(
        extra="ignore",
        case_sensitive=False,
    )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()
