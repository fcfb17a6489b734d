"""
Application settings and configuration.
Uses Pydantic Settings for environment variable management.
"""

from pydantic_settings import BaseSettings
from pydantic import Field
from typing import Optional


class Settings(BaseSettings):
    """Application configuration loaded from FAIRDIV_* environment variables."""

    # Application Settings
    log_level: str = Field(default="INFO", description="Logging level")
    data_dir: str = Field(default="data", description="Directory for instance and result files")

    # Invariant Monitoring
    check_invariants: Optional[bool] = Field(
        default=None,
        description="Force runtime invariant checks on (1) or off (0); unset uses the size rule"
    )
    invariant_size_limit: int = Field(
        default=200,
        description="Invariant checks default on when n*m is at most this"
    )

    # Oracle Budgets
    oracle_max_allocations: int = Field(
        default=10**7,
        description="Largest n^m the brute-force oracle will enumerate"
    )
    lp_max_variables: int = Field(
        default=120,
        description="Largest n*m the exact fPO linear program will accept"
    )

    # Benchmarking
    bench_workers: int = Field(default=1, description="Parallel worker processes for bench")

    class Config:
        env_prefix = "FAIRDIV_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False


# Global settings instance (lazy loaded)
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the application settings (singleton pattern)."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment."""
    global _settings
    _settings = None
