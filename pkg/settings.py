"""
Configuration for symflex using Pydantic BaseSettings.
"""

import logging

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings

logger = logging.getLogger(__name__)

_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


class SymflexSettings(BaseSettings):
    """Search bounds, numerical tolerances and runtime knobs."""

    # Search bounds
    max_edges: int = Field(30, description="Largest |E| accepted by full NAC enumeration")
    max_orbits: int = Field(30, description="Largest number of edge orbits for symmetric enumeration")
    threads: int = Field(1, description="Worker processes for prefix-partitioned searches")

    # Numerical tolerances
    tolerance: float = Field(1e-9, description="Equality residual tolerance")
    nontrivial_factor: float = Field(1e-6, description="Non-triviality threshold relative to max edge length")
    injectivity_tolerance: float = Field(1e-7, description="Distance below which two vertices coincide")

    # Motions
    frames: int = Field(360, description="Default number of sampled frames on [0, 2pi)")
    max_non_injective_frames: int = Field(4)
    base_point_attempts: int = Field(1000)

    # Logging
    log_level: str = Field("WARNING")
    log_json: bool = Field(False)

    model_config = {
        "env_prefix": "SYMFLEX_",
        "env_file": ".env",
        "case_sensitive": False,
        "extra": "ignore",
    }

    @field_validator("max_edges", "max_orbits", "frames", "base_point_attempts")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Bounds and counts must be positive."""
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    @field_validator("max_non_injective_frames")
    @classmethod
    def validate_non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("must not be negative")
        return v

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v: int) -> int:
        if v < 1:
            logger.warning("⚠️ SYMFLEX_THREADS=%s is below 1, using a single worker", v)
            return 1
        return v

    @field_validator("tolerance", "nontrivial_factor", "injectivity_tolerance")
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("tolerances must be strictly positive")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"unknown log level {v!r}")
        return level


# Global settings instance
try:
    settings = SymflexSettings()
    if settings.threads > 1:
        logger.info("🔧 symflex configured with %d worker processes", settings.threads)
except Exception as e:
    logger.error(f"❌ Error loading configuration: {e}")
    raise
