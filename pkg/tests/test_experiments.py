"""
Tests for reports joining sweeps with the analytic limits.
"""

import pytest

from hyperelliptic_class_numbers.engine.experiments import (
    GaussianReport,
    compare_charfun,
    gaussian_report,
    moment_convergence,
    run_hcheck,
)
from hyperelliptic_class_numbers.engine.family import empirical_charfun, sweep
from hyperelliptic_class_numbers.engine.moments import TruncationCtx
from hyperelliptic_class_numbers.engine.summary import SweepConfig


@pytest.fixture(scope="module")
def summaries():
    """Exhaustive q = 5 sweeps for d = 3, 4, 5."""
    return [sweep(SweepConfig(q=5, d=d)) for d in (3, 4, 5)]


class TestHCheck:
    """Tests for the combined analytic check."""

    def test_small_grid_passes(self):
        report = run_hcheck(q_grid=(3, 101), D=8, lambda_max=6, prop2_s=(4, 6),
                            prop3_qs=(101,), prop3_D=4)
        assert len(report.lemma_reports) == 2
        assert len(report.h2_checks) == 2
        assert len(report.prop2_reports) == 4
        assert len(report.prop3_rows) == 4
        assert report.passed

    def test_large_q_truncation_is_capped(self):
        report = run_hcheck(q_grid=(1009,), D=12, lambda_max=4, prop2_s=(), prop3_qs=())
        assert report.lemma_reports[0].D == 6


class TestCharfunComparison:
    """Tests for empirical against truncated phi(t)."""

    def test_rows_follow_the_grid(self, summaries):
        rows = compare_charfun(summaries[-1], TruncationCtx(q=5, D=8))
        assert [row.t for row in rows] == list(summaries[-1].t_grid)
        for row in rows:
            assert row.empirical == empirical_charfun(summaries[-1], row.t)
            assert row.distance == pytest.approx(abs(row.empirical - row.truncated))

    def test_context_must_match(self, summaries):
        with pytest.raises(ValueError):
            compare_charfun(summaries[0], TruncationCtx(q=7, D=4))


class TestMomentConvergence:
    """Tests for |<N_F^r> - H(r)| along d."""

    def test_rows_sorted_by_degree(self, summaries):
        rows = moment_convergence(list(reversed(summaries)), TruncationCtx(q=5, D=10))
        assert [row.d for row in rows] == [3, 3, 4, 4, 5, 5]
        assert all(row.gap >= 0 for row in rows)

    def test_mixed_fields_rejected(self, summaries):
        other = sweep(SweepConfig(q=3, d=3))
        with pytest.raises(ValueError):
            moment_convergence([summaries[0], other])

    def test_empty(self):
        assert moment_convergence([]) == []


class TestGaussianReport:
    """Tests for the normal approximation of sqrt(q) N_F."""

    def test_fields(self, summaries):
        report = gaussian_report(summaries[-1])
        assert report.count == 5**5 - 5**4
        assert report.variance > 0
        assert 0 <= report.ks <= 1

    def test_within(self):
        report = GaussianReport(q=101, d=5, count=1000, mean=0.05, variance=0.95, ks=0.03)
        assert report.within()
        assert not GaussianReport(q=101, d=5, count=1000, mean=0.05, variance=1.6,
                                  ks=0.03).within()
