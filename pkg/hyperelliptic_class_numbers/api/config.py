"""
Web application configuration loaded from environment variables.
"""

import os
from dataclasses import dataclass, field


@dataclass
class AppConfig:
    """Limits applied to requests on top of the library budgets."""

    # Sweep limits
    max_sweep_curves: int = 200_000  # largest family (or sample) a request may visit
    default_sample_count: int = 1000

    # Feature flags
    sweeps_enabled: bool = True

    # CORS origins (comma-separated list)
    cors_origins: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.max_sweep_curves < 1:
            raise ValueError(f"max_sweep_curves must be positive, got {self.max_sweep_curves}")
        if self.default_sample_count < 1:
            raise ValueError(
                f"default_sample_count must be positive, got {self.default_sample_count}"
            )

    @classmethod
    def from_env(cls) -> "AppConfig":
        """Load configuration from environment variables."""
        max_curves = int(os.getenv("MAX_SWEEP_CURVES", "200000"))
        default_samples = int(os.getenv("DEFAULT_SAMPLE_COUNT", "1000"))

        # Default never exceeds the maximum
        default_samples = min(default_samples, max_curves)

        cors_str = os.getenv("CORS_ORIGINS", "http://localhost:5173,http://127.0.0.1:5173")
        if cors_str.strip() == "*":
            cors_origins = ["*"]
        else:
            cors_origins = [origin.strip() for origin in cors_str.split(",") if origin.strip()]

        enabled = os.getenv("SWEEPS_ENABLED", "true").lower() not in ("false", "0", "no")

        return cls(
            max_sweep_curves=max_curves,
            default_sample_count=default_samples,
            sweeps_enabled=enabled,
            cors_origins=cors_origins,
        )


# Global config instance - loaded once at startup
config = AppConfig.from_env()
