"""
Report models for the analytic side and for run bookkeeping.
"""

from datetime import datetime
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

__all__ = [
    "CharfunPoint",
    "InequalityCheck",
    "Lemma21Report",
    "Lemma22Report",
    "LemmaReport",
    "MomentReport",
    "Prop2Report",
    "Prop3Row",
    "RunManifest",
]


class MomentReport(BaseModel):
    """Truncated limiting moment H(s) with its error bar and large-q comparator."""
    model_config = ConfigDict(frozen=True)

    s: int = Field(..., ge=1)
    q: int = Field(..., ge=3)
    D: int = Field(..., ge=1, description="Largest prime degree included")
    value: float = Field(..., ge=0)
    tail_bound: float = Field(..., ge=0, description="Upper bound on the truncation error")
    asymptotic_main: float = Field(..., ge=0)
    oracle_value: Optional[float] = None

    @property
    def ratio(self) -> Optional[float]:
        """value / asymptotic_main, undefined for odd s."""
        if self.asymptotic_main == 0:
            return None
        return self.value / self.asymptotic_main


class CharfunPoint(BaseModel):
    """One sample of the truncated characteristic function."""
    t: float
    real: float
    imag: float
    last_term: float = Field(..., ge=0, description="Magnitude of the last included term")
    r_cap: int
    D: int

    @property
    def value(self) -> complex:
        return complex(self.real, self.imag)


class InequalityCheck(BaseModel):
    """A strict inequality lhs < rhs certified by interval bounds."""
    name: str
    lhs_lower: float
    lhs_upper: float
    rhs_lower: float
    rhs_upper: float
    extra: bool = Field(default=False, description="Stronger than the stated inequality family")

    @property
    def margin(self) -> float:
        return self.rhs_lower - self.lhs_upper

    @property
    def holds(self) -> bool:
        return self.margin > 0

    @property
    def refuted(self) -> bool:
        return self.lhs_lower >= self.rhs_upper


class LemmaReport(BaseModel):
    """Certified h(lambda) inequalities at one truncation context."""
    q: int
    D: int
    lambda_max: int
    checks: list[InequalityCheck] = Field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)

    @property
    def core_checks(self) -> list[InequalityCheck]:
        return [c for c in self.checks if not c.extra]

    @property
    def extra_checks(self) -> list[InequalityCheck]:
        return [c for c in self.checks if c.extra]


class Prop2Report(BaseModel):
    """H(s) next to the large-s bracket and the explicit constant-free bound."""
    s: int = Field(..., ge=4)
    q: int
    D: int
    value: float
    bracket: float
    ratio: float
    explicit_bound: float

    @property
    def explicit_ok(self) -> bool:
        return self.value < self.explicit_bound


class Prop3Row(BaseModel):
    """Finite-q check of q^{s/2} H(s) against its Gaussian limit."""
    q: int
    s: int
    D: int
    scaled_value: float = Field(..., description="q^{s/2} H(s)")
    limit: float
    deviation: float
    allowed: float

    @property
    def holds(self) -> bool:
        return self.deviation <= self.allowed


class Lemma21Report(BaseModel):
    """Average of (F/f) over the family against the exact bound."""
    q: int
    d: int
    f_coeffs: tuple[int, ...]
    family_size: int
    symbol_sum: int
    average: float
    bound: float

    @property
    def holds(self) -> bool:
        return abs(self.average) <= self.bound


class Lemma22Report(BaseModel):
    """Density of F coprime to h against the product main term."""
    q: int
    d: int
    h_coeffs: tuple[int, ...]
    family_size: int
    coprime_count: int
    density: float
    main_term: float
    divisor_count: int
    normalized_deviation: float

    @property
    def within_sanity_bound(self) -> bool:
        return self.normalized_deviation <= 10


class RunManifest(BaseModel):
    """Everything needed to reproduce one CLI run."""
    subcommand: str
    flags: dict[str, Any]
    seed: Optional[int] = None
    version: str
    wall_time_seconds: float = Field(..., ge=0)
    output_checksum: Optional[str] = Field(None, description="sha256 of the output bytes")
    created_at: datetime = Field(default_factory=datetime.now)

    @model_validator(mode="after")
    def check_checksum(self) -> "RunManifest":
        if self.output_checksum is not None and len(self.output_checksum) != 64:
            raise ValueError("output_checksum must be a sha256 hex digest")
        return self
