"""
Family sweep data structures.

Dataclasses for sweep configuration and the mergeable streaming summary.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from ..models.base import LPolyMethod, SweepMode
from .ffield import FieldCtx

# sqrt(q) N_F histogram covers [-HIST_RANGE, HIST_RANGE]; the rest goes to under/overflow
HIST_RANGE = 8.0

# Violation messages kept per summary (first ones in enumeration order)
MAX_VIOLATION_EXAMPLES = 10


@dataclass
class SweepConfig:
    """Configuration for a sweep over monic squarefree F of degree d."""
    q: int
    d: int
    mode: SweepMode = SweepMode.EXHAUSTIVE

    # Sample mode
    sample_count: int = 1000
    rng_seed: int = 0

    worker_count: int = 1
    method: LPolyMethod = LPolyMethod.NEWTON

    # Statistics tracked
    r_max: int = 4
    psi_grid: tuple[float, ...] = (1.0, 2.0, 3.0, 4.0)
    t_grid: tuple[float, ...] = (0.5, 1.0, 2.0)
    cdf_bins: int = 512

    # Numeric root-modulus check for every curve
    check_rh: bool = True

    def __post_init__(self):
        FieldCtx(self.q)
        self.mode = SweepMode(self.mode)
        self.method = LPolyMethod(self.method)
        self.psi_grid = tuple(sorted(float(p) for p in self.psi_grid))
        self.t_grid = tuple(float(t) for t in self.t_grid)
        for name, grid in (("psi_grid", self.psi_grid), ("t_grid", self.t_grid)):
            if not grid:
                raise ValueError(f"{name} must not be empty")
            if not all(math.isfinite(x) for x in grid):
                raise ValueError(f"{name} must contain finite values, got {grid}")
        if self.d < 3:
            raise ValueError(f"d must be >= 3, got {self.d}")
        if self.mode == SweepMode.SAMPLE and self.sample_count < 1:
            raise ValueError(f"sample_count must be >= 1, got {self.sample_count}")
        if not (1 <= self.worker_count <= 64):
            raise ValueError(f"worker_count must be between 1 and 64, got {self.worker_count}")
        if self.r_max < 1:
            raise ValueError(f"r_max must be >= 1, got {self.r_max}")
        if self.cdf_bins < 2:
            raise ValueError(f"cdf_bins must be >= 2, got {self.cdf_bins}")
        if not (0 <= self.rng_seed < 2**64):
            raise ValueError(f"rng_seed must be a 64-bit unsigned integer, got {self.rng_seed}")

    @property
    def genus(self) -> int:
        return (self.d - 1) // 2

    @property
    def family_size(self) -> int:
        """q^d - q^{d-1} monic squarefree polynomials."""
        return self.q**self.d - self.q ** (self.d - 1)


@dataclass
class ExactSum:
    """
    Sum of floats kept as non-overlapping partials (Shewchuk).

    The partials represent the exact sum, so value is the correctly rounded
    total no matter how values were grouped or merged.
    """
    partials: list[float] = field(default_factory=list)

    def add(self, x: float) -> None:
        partials = self.partials
        i = 0
        for y in partials:
            if abs(x) < abs(y):
                x, y = y, x
            hi = x + y
            lo = y - (hi - x)
            if lo:
                partials[i] = lo
                i += 1
            x = hi
        partials[i:] = [x]

    def add_all(self, values: Iterable[float]) -> None:
        for x in values:
            self.add(float(x))

    def merged(self, other: "ExactSum") -> "ExactSum":
        out = ExactSum(list(self.partials))
        out.add_all(other.partials)
        return out

    @property
    def value(self) -> float:
        return math.fsum(self.partials)


@dataclass
class SweepSummary:
    """
    Streaming aggregates of N_F over a family.

    Summaries form a monoid under merged(); merging in shard order gives
    the same result for any worker count.
    """
    q: int
    d: int
    mode: SweepMode
    r_max: int
    psi_grid: tuple[float, ...]
    t_grid: tuple[float, ...]
    cdf_bins: int

    count: int = 0
    power_sums: list[ExactSum] = field(default_factory=list)  # sum N_F^r, r = 1..r_max
    tail_counts: list[int] = field(default_factory=list)  # #{|N_F| >= psi} per psi
    cos_sums: list[ExactSum] = field(default_factory=list)  # sum cos(t N_F) per t
    sin_sums: list[ExactSum] = field(default_factory=list)  # sum sin(t N_F) per t
    hist_counts: Optional[np.ndarray] = None  # sqrt(q) N_F histogram
    hist_underflow: int = 0
    hist_overflow: int = 0
    nf_min: float = math.inf
    nf_max: float = -math.inf

    # Verification
    violations: int = 0
    violation_examples: list[str] = field(default_factory=list)
    rh_max_deviation: float = 0.0

    def __post_init__(self):
        if not self.power_sums:
            self.power_sums = [ExactSum() for _ in range(self.r_max)]
        if not self.tail_counts:
            self.tail_counts = [0] * len(self.psi_grid)
        if not self.cos_sums:
            self.cos_sums = [ExactSum() for _ in self.t_grid]
        if not self.sin_sums:
            self.sin_sums = [ExactSum() for _ in self.t_grid]
        if self.hist_counts is None:
            self.hist_counts = np.zeros(self.cdf_bins, dtype=np.int64)

    @classmethod
    def empty(cls, cfg: SweepConfig) -> "SweepSummary":
        return cls(
            q=cfg.q,
            d=cfg.d,
            mode=cfg.mode,
            r_max=cfg.r_max,
            psi_grid=cfg.psi_grid,
            t_grid=cfg.t_grid,
            cdf_bins=cfg.cdf_bins,
        )

    @property
    def hist_edges(self) -> np.ndarray:
        return np.linspace(-HIST_RANGE, HIST_RANGE, self.cdf_bins + 1)

    def add_values(self, nf: np.ndarray) -> None:
        """Fold a block of N_F values in (block order matters only for speed)."""
        nf = np.asarray(nf, dtype=float)
        if nf.size == 0:
            return
        self.count += int(nf.size)
        power = np.ones_like(nf)
        for r in range(self.r_max):
            power = power * nf
            self.power_sums[r].add_all(power.tolist())
        magnitude = np.abs(nf)
        for i, psi in enumerate(self.psi_grid):
            self.tail_counts[i] += int(np.count_nonzero(magnitude >= psi))
        for i, t in enumerate(self.t_grid):
            self.cos_sums[i].add_all(np.cos(t * nf).tolist())
            self.sin_sums[i].add_all(np.sin(t * nf).tolist())
        scaled = math.sqrt(self.q) * nf
        counts, _ = np.histogram(scaled, bins=self.hist_edges)
        self.hist_counts = self.hist_counts + counts
        self.hist_underflow += int(np.count_nonzero(scaled < -HIST_RANGE))
        self.hist_overflow += int(np.count_nonzero(scaled > HIST_RANGE))
        self.nf_min = min(self.nf_min, float(nf.min()))
        self.nf_max = max(self.nf_max, float(nf.max()))

    def record_violation(self, message: str) -> None:
        self.violations += 1
        if len(self.violation_examples) < MAX_VIOLATION_EXAMPLES:
            self.violation_examples.append(message)

    def merged(self, other: "SweepSummary") -> "SweepSummary":
        """Combine two partial summaries; self's examples come first."""
        if (self.q, self.d, self.r_max, self.psi_grid, self.t_grid, self.cdf_bins) != (
            other.q, other.d, other.r_max, other.psi_grid, other.t_grid, other.cdf_bins
        ):
            raise ValueError("cannot merge summaries of different sweeps")
        return SweepSummary(
            q=self.q,
            d=self.d,
            mode=self.mode,
            r_max=self.r_max,
            psi_grid=self.psi_grid,
            t_grid=self.t_grid,
            cdf_bins=self.cdf_bins,
            count=self.count + other.count,
            power_sums=[a.merged(b) for a, b in zip(self.power_sums, other.power_sums)],
            tail_counts=[a + b for a, b in zip(self.tail_counts, other.tail_counts)],
            cos_sums=[a.merged(b) for a, b in zip(self.cos_sums, other.cos_sums)],
            sin_sums=[a.merged(b) for a, b in zip(self.sin_sums, other.sin_sums)],
            hist_counts=self.hist_counts + other.hist_counts,
            hist_underflow=self.hist_underflow + other.hist_underflow,
            hist_overflow=self.hist_overflow + other.hist_overflow,
            nf_min=min(self.nf_min, other.nf_min),
            nf_max=max(self.nf_max, other.nf_max),
            violations=self.violations + other.violations,
            violation_examples=(self.violation_examples + other.violation_examples)[
                :MAX_VIOLATION_EXAMPLES
            ],
            rh_max_deviation=max(self.rh_max_deviation, other.rh_max_deviation),
        )
