"""Schemas for background family sweeps."""

from datetime import datetime
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from ...models.base import LPolyMethod, SweepMode
from ..config import config


class SweepConfigRequest(BaseModel):
    """Request schema for starting a sweep over monic squarefree F of degree d."""
    q: int = Field(..., ge=3)
    d: int = Field(..., ge=3, le=12)
    mode: SweepMode = SweepMode.EXHAUSTIVE

    # Sample mode
    sample_count: int = Field(default_factory=lambda: config.default_sample_count, ge=1)
    rng_seed: int = Field(default=0, ge=0, lt=2**64)

    worker_count: int = Field(default=1, ge=1, le=8)
    method: LPolyMethod = LPolyMethod.NEWTON

    # Statistics
    r_max: int = Field(default=4, ge=1, le=10)
    psi_grid: list[float] = Field(default_factory=lambda: [1.0, 2.0, 3.0, 4.0])
    t_grid: list[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0])

    @field_validator("sample_count")
    @classmethod
    def validate_sample_count(cls, v: int) -> int:
        """Validate sample_count against the configured maximum."""
        if v > config.max_sweep_curves:
            raise ValueError(f"sample_count cannot exceed {config.max_sweep_curves}")
        return v

    @model_validator(mode="after")
    def validate_family_size(self) -> "SweepConfigRequest":
        if self.mode == SweepMode.EXHAUSTIVE:
            size = self.q**self.d - self.q ** (self.d - 1)
            if size > config.max_sweep_curves:
                raise ValueError(
                    f"family of {size} curves exceeds the limit of {config.max_sweep_curves}; "
                    "use sample mode"
                )
        return self


class SweepStartResponse(BaseModel):
    sweep_id: str
    status: str = "started"
    message: str = "Sweep started"
    curves_total: int


class SweepStatusResponse(BaseModel):
    """Response for sweep status polling."""
    sweep_id: str
    status: Literal["pending", "running", "completed", "cancelled", "error"]
    shards_completed: int
    shards_total: int
    progress: float = Field(ge=0, le=1)
    estimated_time_remaining_seconds: Optional[float] = None
    message: Optional[str] = None
    started_at: Optional[datetime] = None
    completed_at: Optional[datetime] = None


class HistogramBin(BaseModel):
    """Single histogram bin of sqrt(q) N_F."""
    bin_start: float
    bin_end: float
    count: int


class SweepResultResponse(BaseModel):
    """Statistics of a completed sweep."""
    sweep_id: str
    config: dict[str, object]
    count: int
    violations: int
    violation_examples: list[str]
    rh_max_deviation: float
    nf_min: float
    nf_max: float
    moments: dict[int, float]  # r -> <N_F^r>
    scaled_mean: float
    scaled_variance: float
    ks: float
    tail_ratios: dict[str, float]  # psi -> #{|N_F| >= psi} / count
    charfun: dict[str, tuple[float, float]]  # t -> (re, im)
    histogram: list[HistogramBin]
