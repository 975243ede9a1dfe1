"""
Composite reports joining sweeps with the analytic side.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..models.reports import InequalityCheck, LemmaReport, Prop2Report, Prop3Row
from .family import empirical_charfun, empirical_moment, ks_statistic, scaled_mean, scaled_variance
from .moments import (
    H_moment,
    TruncationCtx,
    charfun_truncated,
    h2_bound_check,
    lemma_inequalities,
    prop2_bound_report,
    prop3_grid,
)
from .summary import SweepSummary

logger = logging.getLogger(__name__)


@dataclass
class HCheckReport:
    """Certified h inequalities, the h(2) bound, large-s and large-q reporters."""
    lemma_reports: list[LemmaReport] = field(default_factory=list)
    h2_checks: list[InequalityCheck] = field(default_factory=list)
    prop2_reports: list[Prop2Report] = field(default_factory=list)
    prop3_rows: list[Prop3Row] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            all(r.all_hold for r in self.lemma_reports)
            and all(c.holds for c in self.h2_checks)
            and all(r.explicit_ok for r in self.prop2_reports)
            and all(r.holds for r in self.prop3_rows)
        )


def run_hcheck(
    q_grid: Sequence[int] = (3, 5, 7, 101),
    D: int = 12,
    lambda_max: int = 8,
    prop2_s: Sequence[int] = (4, 6, 8),
    prop3_qs: Sequence[int] = (101, 401, 1009),
    prop3_D: int = 6,
) -> HCheckReport:
    report = HCheckReport()
    for q in q_grid:
        # large q needs no more than degree 6 for certified margins
        ctx = TruncationCtx(q=q, D=D if q < 100 else min(D, 6))
        report.lemma_reports.append(lemma_inequalities(ctx, lambda_max))
        report.h2_checks.append(h2_bound_check(ctx))
        prop2_ctx = TruncationCtx(q=q, D=min(ctx.D, 8))
        for s in prop2_s:
            report.prop2_reports.append(prop2_bound_report(s, q, prop2_ctx))
    report.prop3_rows = prop3_grid(prop3_qs, prop3_D)
    logger.info("hcheck over q=%s: passed=%s", list(q_grid), report.passed)
    return report


@dataclass
class CharfunComparison:
    t: float
    empirical: complex
    truncated: complex
    last_term: float

    @property
    def distance(self) -> float:
        return abs(self.empirical - self.truncated)


def compare_charfun(summary: SweepSummary, ctx: Optional[TruncationCtx] = None,
                    r_cap: int = 8) -> list[CharfunComparison]:
    """Empirical phi(t) of a sweep next to the truncated limit, for every tracked t."""
    ctx = ctx or TruncationCtx(q=summary.q, D=12)
    if ctx.q != summary.q:
        raise ValueError(f"context is for q = {ctx.q}, sweep is for q = {summary.q}")
    rows = []
    for t in summary.t_grid:
        point = charfun_truncated(t, ctx, r_cap)
        rows.append(CharfunComparison(
            t=t, empirical=empirical_charfun(summary, t), truncated=point.value,
            last_term=point.last_term,
        ))
    return rows


@dataclass
class ConvergenceRow:
    d: int
    r: int
    empirical: float
    limit: float

    @property
    def gap(self) -> float:
        return abs(self.empirical - self.limit)


def moment_convergence(summaries: Sequence[SweepSummary], ctx: Optional[TruncationCtx] = None,
                       r_values: Sequence[int] = (1, 2)) -> list[ConvergenceRow]:
    """|<N_F^r> - H(r)| for each sweep, ordered by degree."""
    if not summaries:
        return []
    q = summaries[0].q
    if any(s.q != q for s in summaries):
        raise ValueError("all sweeps must share q")
    ctx = ctx or TruncationCtx(q=q, D=12)
    limits = {r: H_moment(r, ctx).value for r in r_values}
    rows = []
    for summary in sorted(summaries, key=lambda s: s.d):
        for r in r_values:
            rows.append(ConvergenceRow(
                d=summary.d, r=r, empirical=empirical_moment(summary, r), limit=limits[r]
            ))
    return rows


@dataclass
class GaussianReport:
    """sqrt(q) N_F against the standard normal."""
    q: int
    d: int
    count: int
    mean: float
    variance: float
    ks: float

    def within(self, mean_tol: float = 0.15, variance_range: tuple[float, float] = (0.70, 1.30),
               ks_tol: float = 0.10) -> bool:
        lo, hi = variance_range
        return abs(self.mean) <= mean_tol and lo <= self.variance <= hi and self.ks <= ks_tol


def gaussian_report(summary: SweepSummary) -> GaussianReport:
    report = GaussianReport(
        q=summary.q,
        d=summary.d,
        count=summary.count,
        mean=scaled_mean(summary),
        variance=scaled_variance(summary),
        ks=ks_statistic(summary),
    )
    if not math.isfinite(report.variance):
        logger.warning("non-finite variance for q=%d d=%d", summary.q, summary.d)
    return report
