"""
Configuration settings for the extrinsic triples toolkit.
"""

from contextlib import contextmanager
from typing import Any, Iterator, Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="TRIPLES_",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    app_name: str = "Extrinsic Triples Toolkit"
    version: str = "0.1.0"

    # Logging
    log_level: str = "WARNING"
    log_format: str = "json"  # Options: "json" or "console"

    # Exact algebra
    decomposition_search_bound: int = 4096

    # Geometry tolerances
    tolerance_manifold: float = 1e-6
    tolerance_curvature: float = 1e-4
    tolerance_parallel: float = 1e-3
    tolerance_signature: float = 1e-7
    tolerance_isometry: float = 1e-9
    tolerance_mean_direction: float = 1e-3

    # Numerical differentiation and projection
    fd_step: float = 1e-3
    gauss_newton_max_iter: int = 50
    gauss_newton_tol: float = 1e-12
    max_word_length: int = 6

    # CLI
    default_grid: int = 11
    default_seed: int = 0
    default_probes: int = 50
    float_digits: int = 12
    output_dir: Optional[str] = None

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Unknown log level: {v}")
        return level

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        if v not in ("json", "console"):
            raise ValueError("Log format must be 'json' or 'console'")
        return v

    @field_validator(
        "tolerance_manifold",
        "tolerance_curvature",
        "tolerance_parallel",
        "tolerance_signature",
        "tolerance_isometry",
        "tolerance_mean_direction",
        "fd_step",
        "gauss_newton_tol",
    )
    @classmethod
    def validate_positive(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("Tolerances and step sizes must be positive")
        return v

    @field_validator("decomposition_search_bound", "gauss_newton_max_iter", "max_word_length")
    @classmethod
    def validate_bound(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Bounds must be at least 1")
        return v


# Global settings instance
settings = Settings()


@contextmanager
def override_settings(**updates: Any) -> Iterator[Settings]:
    """Temporarily update the global settings in place; ``None`` values are ignored.

    Updates are validated by building a fresh ``Settings`` first.
    """
    updates = {key: value for key, value in updates.items() if value is not None}
    validated = Settings(**{**settings.model_dump(), **updates})
    previous = {key: getattr(settings, key) for key in updates}
    try:
        for key in updates:
            setattr(settings, key, getattr(validated, key))
        yield settings
    finally:
        for key, value in previous.items():
            setattr(settings, key, value)
