"""
Tests for family sweeps, seeded sampling and the streaming summary.
"""

import math

import pytest

from hyperelliptic_class_numbers.config import config as library_config
from hyperelliptic_class_numbers.engine import family
from hyperelliptic_class_numbers.engine.family import (
    charfun_from_rows,
    empirical_charfun,
    empirical_moment,
    ks_statistic,
    lemma21_check,
    lemma22_check,
    scaled_variance,
    shard_ranges,
    summary_rows,
    sweep,
    tail_bound_reference,
    tail_count,
)
from hyperelliptic_class_numbers.engine.summary import ExactSum, SweepConfig, SweepSummary
from hyperelliptic_class_numbers.exceptions import BudgetExceededError
from hyperelliptic_class_numbers.models.base import LPolyMethod, SweepMode


@pytest.fixture(scope="module")
def cubic_family():
    """Exhaustive summary and records for q = 3, d = 3."""
    records = []
    summary = sweep(SweepConfig(q=3, d=3), record_sink=records.append)
    return summary, records


class TestSweepConfig:
    """Tests for sweep configuration validation."""

    def test_family_size_and_genus(self):
        cfg = SweepConfig(q=5, d=6)
        assert cfg.family_size == 5**6 - 5**5
        assert cfg.genus == 2

    @pytest.mark.parametrize("kwargs", [
        {"q": 3, "d": 2},
        {"q": 9, "d": 3},
        {"q": 3, "d": 3, "worker_count": 0},
        {"q": 3, "d": 3, "r_max": 0},
        {"q": 3, "d": 3, "mode": SweepMode.SAMPLE, "sample_count": 0},
        {"q": 3, "d": 3, "rng_seed": -1},
        {"q": 3, "d": 3, "psi_grid": []},
        {"q": 3, "d": 3, "t_grid": []},
        {"q": 3, "d": 3, "psi_grid": [1.0, float("nan")]},
        {"q": 3, "d": 3, "t_grid": [float("inf")]},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SweepConfig(**kwargs)

    def test_grids_are_normalised(self):
        cfg = SweepConfig(q=3, d=3, psi_grid=[3, 1, 2], t_grid=[1])
        assert cfg.psi_grid == (1.0, 2.0, 3.0)
        assert cfg.t_grid == (1.0,)


class TestExhaustiveSweep:
    """Tests for sweeps over every monic squarefree F."""

    @pytest.mark.parametrize("d,count", [(3, 18), (4, 54), (5, 162)])
    def test_family_counts(self, d, count):
        summary = sweep(SweepConfig(q=3, d=d))
        assert summary.count == count
        assert summary.violations == 0
        assert summary.rh_max_deviation < 1e-6

    def test_records_in_enumeration_order(self, cubic_family):
        summary, records = cubic_family
        assert len(records) == 18
        indices = [sum(c * 3**k for k, c in enumerate(r.f_coeffs[:-1])) for r in records]
        assert indices == sorted(indices)

    def test_moments_match_records(self, cubic_family):
        summary, records = cubic_family
        values = [r.n_f for r in records]
        assert empirical_moment(summary, 1) == pytest.approx(math.fsum(values) / 18)
        assert empirical_moment(summary, 2) == pytest.approx(
            math.fsum(v * v for v in values) / 18
        )
        assert summary.nf_min == min(values)
        assert summary.nf_max == max(values)

    def test_shard_layout_does_not_change_results(self, monkeypatch):
        """Fixed shards merged in order reproduce the single-shard summary bit for bit."""
        cfg = SweepConfig(q=3, d=4)
        whole = summary_rows(sweep(cfg))
        monkeypatch.setattr(library_config, "shard_size", 16)
        assert len(shard_ranges(cfg)) == 6
        sharded = summary_rows(sweep(cfg))
        assert sharded[4] == ("count", "54")
        assert sharded == whole

    @pytest.mark.slow
    def test_worker_count_does_not_change_results(self, small_shards):
        one = sweep(SweepConfig(q=3, d=5, worker_count=1))
        four = sweep(SweepConfig(q=3, d=5, worker_count=4))
        assert summary_rows(one) == summary_rows(four)

    @pytest.mark.parametrize("method", [LPolyMethod.POINTCOUNT, LPolyMethod.CHARSUM])
    def test_methods_agree(self, method):
        expected = summary_rows(sweep(SweepConfig(q=3, d=4)))
        assert summary_rows(sweep(SweepConfig(q=3, d=4, method=method))) == expected

    def test_exhaustive_budget(self):
        with pytest.raises(BudgetExceededError):
            sweep(SweepConfig(q=101, d=5))

    def test_charsum_budget(self):
        with pytest.raises(BudgetExceededError):
            sweep(SweepConfig(q=7, d=6, method=LPolyMethod.CHARSUM))

    def test_cancellation(self, small_shards):
        summary = sweep(SweepConfig(q=3, d=4), should_stop=lambda: True)
        assert summary.count == 0
        assert summary.violations == 0

    def test_progress(self, small_shards):
        seen = []
        sweep(SweepConfig(q=3, d=4), progress=lambda done, total: seen.append((done, total)))
        assert seen[-1] == (6, 6)


class TestViolations:
    """Tests for the per-curve checks run inside every sweep."""

    @pytest.mark.parametrize("d", [4, 6])
    def test_even_families_are_clean(self, d):
        summary = sweep(SweepConfig(q=3, d=d, check_rh=True))
        assert summary.count == 3**d - 3 ** (d - 1)
        assert summary.violations == 0
        assert summary.violation_examples == []
        assert summary.rh_max_deviation < 1e-6

    def test_power_sum_bound_is_enforced(self, monkeypatch):
        original = family._power_sums_and_coeffs

        def inflated(cfg, polys):
            sums, coeffs = original(cfg, polys)
            return sums * 10, coeffs

        monkeypatch.setattr(family, "_power_sums_and_coeffs", inflated)
        summary = sweep(SweepConfig(q=3, d=4, check_rh=False))
        assert summary.violations > 0
        assert any("power sum exceeds" in m for m in summary.violation_examples)

    def test_messages_name_the_curve(self, monkeypatch):
        monkeypatch.setattr(family, "verify_class_number", lambda h, g, q: ["forced"])
        records = []
        summary = sweep(SweepConfig(q=3, d=3, check_rh=False), record_sink=records.append)
        assert summary.violations == 18
        assert summary.violation_examples[0] == f"F={records[0].poly_text}: forced"


class TestSampling:
    """Tests for seeded sampling."""

    def test_reproducible(self):
        cfg = SweepConfig(q=5, d=5, mode=SweepMode.SAMPLE, sample_count=300, rng_seed=7)
        first, second = [], []
        sweep(cfg, record_sink=first.append)
        sweep(cfg, record_sink=second.append)
        assert len(first) == 300
        assert [r.f_coeffs for r in first] == [r.f_coeffs for r in second]

    def test_seed_changes_draws(self):
        draws = []
        for seed in (1, 2):
            records = []
            cfg = SweepConfig(q=5, d=5, mode=SweepMode.SAMPLE, sample_count=50, rng_seed=seed)
            sweep(cfg, record_sink=records.append)
            draws.append([r.f_coeffs for r in records])
        assert draws[0] != draws[1]

    def test_samples_are_squarefree(self):
        records = []
        cfg = SweepConfig(q=3, d=4, mode=SweepMode.SAMPLE, sample_count=100, rng_seed=3)
        summary = sweep(cfg, record_sink=records.append)
        assert summary.count == 100
        assert summary.violations == 0
        assert all(r.f_coeffs[-1] == 1 for r in records)


class TestSummaryReaders:
    """Tests for reading statistics back out of a summary."""

    def test_moment_zero_and_range(self, cubic_family):
        summary, _ = cubic_family
        assert empirical_moment(summary, 0) == 1.0
        with pytest.raises(ValueError):
            empirical_moment(summary, summary.r_max + 1)

    def test_tail_counts(self, cubic_family):
        summary, records = cubic_family
        assert tail_count(summary, 1.0) == sum(abs(r.n_f) >= 1.0 for r in records)
        assert tail_count(summary, 0.0) == 18
        assert tail_count(summary, 1e6) == 0
        with pytest.raises(ValueError):
            tail_count(summary, 1e-3)

    def test_tail_reference(self):
        assert tail_bound_reference(1.0, 3) is None
        assert tail_bound_reference(2.0, 3) == pytest.approx(1 / (3 * math.log(2)))

    def test_charfun(self, cubic_family):
        summary, records = cubic_family
        assert empirical_charfun(summary, 0.0) == 1
        value = empirical_charfun(summary, 1.0)
        expected = sum(complex(math.cos(r.n_f), math.sin(r.n_f)) for r in records) / 18
        assert abs(value - expected) < 1e-12
        assert empirical_charfun(summary, -1.0) == value.conjugate()
        with pytest.raises(ValueError):
            empirical_charfun(summary, 0.3)

    def test_distribution_statistics(self, cubic_family):
        summary, _ = cubic_family
        assert scaled_variance(summary) > 0
        assert 0 <= ks_statistic(summary) <= 1

    def test_rows_round_trip_charfun(self, cubic_family):
        summary, _ = cubic_family
        rows = summary_rows(summary)
        keys = [k for k, _ in rows]
        assert keys[:5] == ["q", "d", "g", "mode", "count"]
        assert "moment_4" in keys
        charfun = charfun_from_rows(rows)
        assert set(charfun) == set(summary.t_grid)
        assert abs(charfun[1.0] - empirical_charfun(summary, 1.0)) < 1e-15

    def test_empty_summary_rows(self):
        rows = summary_rows(SweepSummary.empty(SweepConfig(q=3, d=3)))
        assert dict(rows)["count"] == "0"
        assert "moment_1" not in dict(rows)


class TestExactSum:
    """Tests for order-independent float sums."""

    def test_cancellation_is_exact(self):
        total = ExactSum()
        total.add_all([1e16, 1.0, -1e16])
        assert total.value == 1.0

    def test_merge_order(self):
        a, b = ExactSum(), ExactSum()
        a.add_all([0.1] * 10)
        b.add_all([1e-17, 3.0])
        assert a.merged(b).value == b.merged(a).value

    def test_mismatched_summaries_do_not_merge(self):
        a = SweepSummary.empty(SweepConfig(q=3, d=3))
        b = SweepSummary.empty(SweepConfig(q=3, d=4))
        with pytest.raises(ValueError):
            a.merged(b)


class TestCharacterAverages:
    """Tests for the family averages of (F/f) and the coprime density."""

    def test_linear_modulus(self, f3):
        report = lemma21_check(f3.parse("0,1"), 3)
        assert report.family_size == 18
        assert report.bound == pytest.approx(0.2887, abs=1e-4)
        assert report.holds

    def test_quadratic_modulus(self, f3):
        report = lemma21_check(f3.parse("1,0,1"), 5)
        assert report.bound == pytest.approx(0.1925, abs=1e-4)
        assert report.holds

    @pytest.mark.parametrize("text", ["2,0,1", "0,2"])
    def test_modulus_must_be_monic_irreducible(self, f3, text):
        with pytest.raises(ValueError):
            lemma21_check(f3.parse(text), 3)

    def test_all_monic_balance_exactly(self, f3):
        report = lemma21_check(f3.parse("1,0,1"), 4, include_non_squarefree=True)
        assert report.family_size == 81
        assert report.symbol_sum == 0

    def test_coprime_density(self, f3):
        """14 of the 18 squarefree cubics have nonzero constant term."""
        report = lemma22_check(f3.parse("0,1"), 3)
        assert report.coprime_count == 14
        assert report.main_term == pytest.approx(0.75)
        assert report.divisor_count == 2
        assert report.within_sanity_bound

    def test_two_factors(self, f3):
        report = lemma22_check(f3.parse("0,1,1"), 4)
        assert report.main_term == pytest.approx(0.5625)
        assert report.divisor_count == 4
