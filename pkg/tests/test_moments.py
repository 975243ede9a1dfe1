"""
Tests for the limiting moments H(s), the characteristic function and the
certified h(lambda) inequalities.
"""

import math

import pytest

from hyperelliptic_class_numbers.engine.moments import (
    H_asymptotic,
    H_moment,
    H_moment_bruteforce,
    H_power_series,
    TruncationCtx,
    charfun_product,
    charfun_truncated,
    eta_tau,
    h2_bound_check,
    h_lambda,
    h_leading,
    lemma_inequalities,
    prop2_bound_report,
    prop2_explicit_bound,
    prop3_grid,
    u_v,
)


@pytest.fixture(scope="module")
def six_primes():
    """q = 3 with all 3 linear and 3 quadratic primes."""
    return TruncationCtx(q=3, D=2)


class TestTruncationCtx:
    """Tests for the prime-degree truncation context."""

    def test_full_counts(self):
        ctx = TruncationCtx(q=3, D=4)
        assert ctx.counts == (3, 3, 8, 18)
        assert ctx.complete
        assert ctx.total_primes == 32

    def test_partial_counts(self):
        ctx = TruncationCtx.with_counts(3, [2, 1])
        assert not ctx.complete
        assert ctx.prime_degrees() == [1, 1, 2]

    def test_too_many_primes(self):
        with pytest.raises(ValueError):
            TruncationCtx.with_counts(3, [4])

    @pytest.mark.parametrize("q", [2, 4, 9])
    def test_q_must_be_an_odd_prime(self, q):
        with pytest.raises(ValueError):
            TruncationCtx(q=q, D=2)

    def test_explicit_expansion_limit(self):
        with pytest.raises(ValueError):
            TruncationCtx(q=3, D=3).prime_degrees()


class TestPrimeWeights:
    """Tests for u, v and the even/odd recursion."""

    def test_u_v(self):
        u, v = u_v(1, 3)
        assert u == pytest.approx(0.405465, abs=1e-6)
        assert v == pytest.approx(0.287682, abs=1e-6)
        u, v = u_v(2, 3)
        assert u == pytest.approx(0.117783, abs=1e-6)
        assert v == pytest.approx(0.105361, abs=1e-6)

    def test_eta_tau(self):
        u, v = u_v(1, 3)
        assert eta_tau(0, 1, 3) == (1.0, 0.0)
        eta1, tau1 = eta_tau(1, 1, 3)
        assert eta1 == pytest.approx(0.058891, abs=1e-6)
        assert tau1 == pytest.approx((u + v) / 2)
        eta2, tau2 = eta_tau(2, 1, 3)
        assert eta2 == pytest.approx((u * u + v * v) / 2)
        assert tau2 == pytest.approx((u * u - v * v) / 2)

    def test_h1_closed_form(self):
        """sum_P -log(1 - |P|^{-2}) = -log(1 - 1/q)."""
        value, tail = h_lambda(1, TruncationCtx(q=3, D=30))
        assert value == pytest.approx(-math.log(2 / 3), abs=1e-12)
        assert tail < 1e-12

    def test_h2(self):
        value, tail = h_lambda(2, TruncationCtx(q=3, D=12))
        assert 0.84 < value < 0.86
        assert tail < 1e-3

    def test_tail_encloses_deeper_truncation(self):
        for lam in (1, 2, 3, 4):
            low, tail = h_lambda(lam, TruncationCtx(q=3, D=6))
            deep, _ = h_lambda(lam, TruncationCtx(q=3, D=14))
            assert low <= deep <= low + tail

    def test_leading_terms(self):
        q = 10007
        for lam in (1, 2, 3, 4):
            value, _ = h_lambda(lam, TruncationCtx(q=q, D=3))
            assert value == pytest.approx(h_leading(lam, q), rel=1e-2)


class TestMoments:
    """Tests for H(s)."""

    def test_first_moment_small_context(self):
        assert H_moment(1, TruncationCtx(q=3, D=1)).value == pytest.approx(0.132506, abs=1e-6)

    @pytest.mark.parametrize("s", [1, 2, 3, 4])
    def test_bruteforce_agrees(self, six_primes, s):
        """Set-partition expansion equals nested loops over distinct primes."""
        expected = H_moment_bruteforce(s, six_primes)
        assert H_moment(s, six_primes).value == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("s", [1, 2, 3, 4, 5, 6])
    def test_power_series_agrees(self, s):
        ctx = TruncationCtx(q=5, D=6)
        report = H_moment(s, ctx, oracle=True)
        assert report.value == pytest.approx(report.oracle_value, rel=1e-10)

    def test_partial_context(self):
        ctx = TruncationCtx.with_counts(5, [3, 2])
        for s in (2, 3):
            assert H_moment(s, ctx).value == pytest.approx(H_moment_bruteforce(s, ctx),
                                                           rel=1e-12)
            assert H_power_series(s, ctx) == pytest.approx(H_moment_bruteforce(s, ctx),
                                                           rel=1e-12)

    def test_tail_encloses_deeper_truncation(self):
        shallow = H_moment(2, TruncationCtx(q=3, D=6))
        deep = H_moment(2, TruncationCtx(q=3, D=12))
        assert shallow.value <= deep.value <= shallow.value + shallow.tail_bound

    def test_asymptotic(self):
        q = 1009
        assert H_asymptotic(2, q) == pytest.approx(1 / q)
        assert H_asymptotic(4, q) == pytest.approx(3 / q**2)
        assert H_asymptotic(3, q) == 0.0
        report = H_moment(2, TruncationCtx(q=q, D=4))
        assert report.ratio == pytest.approx(1.0, rel=0.05)
        assert H_moment(3, TruncationCtx(q=q, D=4)).ratio is None

    @pytest.mark.parametrize("s", [0, 11])
    def test_range(self, s):
        with pytest.raises(ValueError):
            H_moment(s, TruncationCtx(q=3, D=2))


class TestCharfun:
    """Tests for the truncated characteristic function."""

    def test_origin(self):
        point = charfun_truncated(0.0, TruncationCtx(q=3, D=8))
        assert point.value == pytest.approx(1.0)

    def test_conjugate_symmetry(self):
        ctx = TruncationCtx(q=5, D=8)
        plus = charfun_truncated(1.5, ctx).value
        minus = charfun_truncated(-1.5, ctx).value
        assert minus.real == pytest.approx(plus.real, abs=1e-15)
        assert minus.imag == pytest.approx(-plus.imag, abs=1e-15)

    def test_matches_product(self):
        ctx = TruncationCtx(q=5, D=6)
        for t in (0.5, 1.0, 2.0):
            point = charfun_truncated(t, ctx, r_cap=10)
            assert abs(point.value - charfun_product(t, ctx)) < 1e-9
            assert point.last_term < 1e-9

    def test_bounded_by_one(self):
        ctx = TruncationCtx(q=3, D=8)
        for t in (0.5, 1.0, 4.0):
            assert abs(charfun_product(t, ctx)) <= 1.0 + 1e-12

    def test_r_cap_range(self):
        with pytest.raises(ValueError):
            charfun_truncated(1.0, TruncationCtx(q=3, D=2), r_cap=0)


class TestInequalities:
    """Tests for the certified h(lambda) inequalities and the reporters built on them."""

    @pytest.mark.parametrize("q,D", [(3, 12), (5, 10), (101, 6)])
    def test_all_hold(self, q, D):
        report = lemma_inequalities(TruncationCtx(q=q, D=D), lambda_max=8)
        assert len(report.checks) == 14
        assert report.all_hold
        assert not any(check.refuted for check in report.checks)

    def test_extra_checks_are_labelled(self):
        report = lemma_inequalities(TruncationCtx(q=5, D=10), lambda_max=8)
        core = {check.name for check in report.core_checks}
        extra = {check.name for check in report.extra_checks}
        assert len(core) == 8
        assert len(extra) == 6
        assert "h(4) < h(2) h(2)" in core
        assert "h(3) < h(2) h(1)" in extra
        assert "h(8) < h(2)^(8/2)" in extra
        assert "h(1) h(3) < h(2)^2" in core

    def test_lambda_max_range(self):
        with pytest.raises(ValueError):
            lemma_inequalities(TruncationCtx(q=3, D=4), lambda_max=2)

    def test_h2_bound(self):
        check = h2_bound_check(TruncationCtx(q=3, D=12))
        assert check.holds
        assert check.rhs_lower == pytest.approx(10 / 3)

    def test_large_s_report(self):
        report = prop2_bound_report(4, 101, TruncationCtx(q=101, D=6))
        assert report.explicit_ok
        assert report.explicit_bound == pytest.approx(prop2_explicit_bound(4, 101))
        assert report.ratio == pytest.approx(report.value / report.bracket)

    def test_large_s_report_preconditions(self):
        with pytest.raises(ValueError):
            prop2_bound_report(3, 101)
        with pytest.raises(ValueError):
            prop2_bound_report(4, 101, TruncationCtx(q=103, D=4))

    def test_large_q_grid(self):
        rows = prop3_grid(qs=(101, 401), D=4)
        assert len(rows) == 8
        assert all(row.holds for row in rows)
        by_s = {(row.q, row.s): row for row in rows}
        assert by_s[(401, 2)].limit == pytest.approx(1.0)
        assert by_s[(401, 4)].limit == pytest.approx(3.0)
