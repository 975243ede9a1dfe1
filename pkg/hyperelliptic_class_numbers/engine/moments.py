"""
Limiting moments H(s) and the characteristic function of N_F at fixed q.

Every sum over primes P of F_q[X] is grouped by degree: pi_q(n) primes of
norm q^n share the weights

    u_n = -log(1 - q^{-n}),   v_n = log(1 + q^{-n}),

so a prime sum truncated at degree D costs O(D) whatever the number of primes.
Sums over distinct tuples of primes are expanded by set-partition
inclusion-exclusion into products of such degree-grouped block sums.

Truncation tails rest on u_P <= 2|P|^{-1} and u_P - v_P <= 2|P|^{-2}
(both valid for |P| >= 2) together with pi_q(n) <= q^n / n.
"""

import itertools
import logging
import math
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import mpmath
import numpy as np
from sympy.utilities.iterables import multiset_partitions, partitions

from ..exceptions import InconclusiveError
from ..models.reports import (
    CharfunPoint,
    InequalityCheck,
    LemmaReport,
    MomentReport,
    Prop2Report,
    Prop3Row,
)
from .ffield import FieldCtx, prime_count_exact

logger = logging.getLogger(__name__)

# Bell(10) = 115975 set partitions is the largest expansion we run
MAX_MOMENT = 10

# Nested-loop oracle works on at most this many explicit primes
BRUTEFORCE_PRIMES = 8

# Working precision (bits) of certified interval comparisons
INTERVAL_PREC = 113


@dataclass(frozen=True)
class TruncationCtx:
    """
    Primes of degree <= D over F_q (q an odd prime), kept as counts per degree.

    counts defaults to the full pi_q(n); a smaller count removes primes
    (used to check monotonicity and to build explicit oracle contexts).
    Tail bounds always cover the degrees above D only.
    """
    q: int
    D: int
    counts: tuple[int, ...] = ()

    def __post_init__(self):
        FieldCtx(self.q)
        if self.D < 1:
            raise ValueError(f"D must be >= 1, got {self.D}")
        full = tuple(prime_count_exact(self.q, n) for n in range(1, self.D + 1))
        if not self.counts:
            object.__setattr__(self, "counts", full)
            return
        if len(self.counts) != self.D:
            raise ValueError(f"expected {self.D} prime counts, got {len(self.counts)}")
        for n, (count, limit) in enumerate(zip(self.counts, full), start=1):
            if not (0 <= count <= limit):
                raise ValueError(f"degree {n} has {limit} primes, asked for {count}")

    @classmethod
    def with_counts(cls, q: int, counts: Sequence[int]) -> "TruncationCtx":
        return cls(q=q, D=len(counts), counts=tuple(int(c) for c in counts))

    @property
    def complete(self) -> bool:
        return self.counts == tuple(prime_count_exact(self.q, n) for n in range(1, self.D + 1))

    @property
    def total_primes(self) -> int:
        return sum(self.counts)

    @property
    def norms_inverse(self) -> np.ndarray:
        """q^{-n} for n = 1..D."""
        return float(self.q) ** -np.arange(1, self.D + 1, dtype=float)

    @property
    def count_array(self) -> np.ndarray:
        return np.array(self.counts, dtype=float)

    def prime_degrees(self) -> list[int]:
        """One degree per prime, for the explicit oracles."""
        if self.total_primes > BRUTEFORCE_PRIMES:
            raise ValueError(
                f"{self.total_primes} primes is too many to expand (limit {BRUTEFORCE_PRIMES})"
            )
        return [n for n, count in enumerate(self.counts, start=1) for _ in range(count)]


# --- per-prime weights ---------------------------------------------------

def u_v(degree: int, q: int) -> tuple[float, float]:
    """(-log(1 - q^{-deg}), log(1 + q^{-deg}))."""
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree}")
    x = float(q) ** -degree
    return -math.log1p(-x), math.log1p(x)


def _numerators(lam: int, x: np.ndarray) -> np.ndarray:
    """u^lam + (-1)^lam v^lam, with u - v = -log(1 - x^2) taken directly for odd lam."""
    u = -np.log1p(-x)
    v = np.log1p(x)
    if lam % 2 == 0:
        return u**lam + v**lam
    spread = -np.log1p(-x * x)
    return spread * sum(u**k * v ** (lam - 1 - k) for k in range(lam))


def eta_tau(lam: int, degree: int, q: int) -> tuple[float, float]:
    """
    Even/odd parts of u^lam, by eta(l) = eta(1) eta(l-1) + tau(1) tau(l-1) and
    tau(l) = eta(1) tau(l-1) + tau(1) eta(l-1) from eta(0) = 1, tau(0) = 0.
    """
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    u, v = u_v(degree, q)
    eta1, tau1 = (u - v) / 2, (u + v) / 2
    eta, tau = 1.0, 0.0
    for _ in range(lam):
        eta, tau = eta1 * eta + tau1 * tau, eta1 * tau + tau1 * eta
    return eta, tau


def _tail_shape(lam: int) -> tuple[float, int]:
    """(c, e) with |u^lam + (-1)^lam v^lam| <= c x^e for x = |P|^{-1} <= 1/2."""
    if lam % 2 == 0:
        return 2.0 ** (lam + 1), lam
    return lam * 2.0**lam, lam + 1


def _geometric_tail(coefficient: float, exponent: int, q: int, D: int) -> float:
    """coefficient * sum_{n > D} q^{n(1 - exponent)} / n, for exponent >= 2."""
    ratio = float(q) ** (1 - exponent)
    return coefficient * ratio ** (D + 1) / ((D + 1) * (1 - ratio))


def h_lambda(lam: int, ctx: TruncationCtx) -> tuple[float, float]:
    """
    h(lam) = sum_P (u_P^lam + (-1)^lam v_P^lam) over degrees <= D, with a tail bound.

    Every term is positive, so value is a lower bound and value + tail an upper bound.
    """
    if lam < 1:
        raise ValueError(f"lambda must be >= 1, got {lam}")
    terms = ctx.count_array * _numerators(lam, ctx.norms_inverse)
    coefficient, exponent = _tail_shape(lam)
    return math.fsum(terms.tolist()), _geometric_tail(coefficient, exponent, ctx.q, ctx.D)


def h_leading(lam: int, q: int) -> float:
    """Large-q size of h(lam): 2 q^{1-lam} for even lam, lam q^{-lam} for odd lam."""
    if lam < 1:
        raise ValueError(f"lambda must be >= 1, got {lam}")
    if lam % 2 == 0:
        return 2.0 * float(q) ** (1 - lam)
    return lam * float(q) ** -lam


# --- distinct-tuple expansion ---------------------------------------------

@lru_cache(maxsize=MAX_MOMENT + 1)
def _set_partitions(r: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    return tuple(tuple(tuple(block) for block in p) for p in multiset_partitions(list(range(r))))


def _block_sign(size: int) -> int:
    """Moebius value of a block: (-1)^{|B|-1} (|B|-1)!."""
    return (-1) ** (size - 1) * math.factorial(size - 1)


def _integer_partitions(s: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """(parts in descending order, product of multiplicity factorials)."""
    for p in partitions(s):
        parts = tuple(sorted((k for k, m in p.items() for _ in range(m)), reverse=True))
        weight = math.prod(math.factorial(m) for m in p.values())
        yield parts, weight


class _MomentWeights:
    """
    w_lam(n) = (u^lam + (-1)^lam v^lam) / (lam! (1 + q^{-n})) per degree, and
    block sums sum_n pi(n) prod_i w_{lam_i}(n) with their tails.
    """

    def __init__(self, ctx: TruncationCtx, s: int):
        self.ctx = ctx
        x = ctx.norms_inverse
        self.w = {
            lam: _numerators(lam, x) / (math.factorial(lam) * (1 + x)) for lam in range(1, s + 1)
        }
        self.counts = ctx.count_array
        self._blocks: dict[tuple[int, ...], tuple[float, float]] = {}

    def block(self, labels: tuple[int, ...]) -> tuple[float, float]:
        key = tuple(sorted(labels))
        if key not in self._blocks:
            product = self.counts.copy()
            coefficient, exponent = 1.0, 0
            for lam in key:
                product = product * self.w[lam]
                c, e = _tail_shape(lam)
                coefficient *= c / math.factorial(lam)
                exponent += e
            tail = _geometric_tail(coefficient, exponent, self.ctx.q, self.ctx.D)
            self._blocks[key] = (math.fsum(product.tolist()), tail)
        return self._blocks[key]

    def distinct_sum(self, labels: tuple[int, ...]) -> tuple[float, float]:
        """
        sum over distinct P_1..P_r of prod_i w_{labels_i}(P_i), and a bound on
        how far the untruncated sum can be from it.
        """
        values, tails = [], []
        for partition in _set_partitions(len(labels)):
            product, magnitude, widened = 1.0, 1.0, 1.0
            for block in partition:
                s_b, t_b = self.block(tuple(labels[i] for i in block))
                sign = _block_sign(len(block))
                product *= sign * s_b
                magnitude *= abs(sign * s_b)
                widened *= abs(sign) * (abs(s_b) + t_b)
            values.append(product)
            tails.append(widened - magnitude)
        # the exact distinct sum is non-negative; clamp rounding noise
        return max(math.fsum(values), 0.0), math.fsum(tails)


def _check_moment(s: int) -> None:
    if not (1 <= s <= MAX_MOMENT):
        raise ValueError(f"s must be between 1 and {MAX_MOMENT}, got {s}")


def H_asymptotic(s: int, q: int) -> float:
    """[s even] s! / (2^{s/2} (s/2)!) q^{-s/2}."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if s % 2:
        return 0.0
    half = s // 2
    return math.factorial(s) / (2**half * math.factorial(half)) * float(q) ** -half


def H_moment(s: int, ctx: TruncationCtx, oracle: bool = False) -> MomentReport:
    """
    H(s) = sum_r s!/(2^r r!) sum_{lam_1 + .. + lam_r = s} sum_{P_i distinct} prod w_{lam_i}(P_i).

    Compositions sharing a multiset of parts give equal distinct sums, so each
    integer partition of s is expanded once and weighted by its number of
    orderings. oracle=True attaches the power-series value.
    """
    _check_moment(s)
    weights = _MomentWeights(ctx, s)
    values, tails = [], []
    for parts, multiplicity in _integer_partitions(s):
        r = len(parts)
        # s!/(2^r r!) times r!/prod(m_k!) orderings
        prefactor = math.factorial(s) / (2**r * multiplicity)
        value, tail = weights.distinct_sum(parts)
        values.append(prefactor * value)
        tails.append(prefactor * tail)
    report = MomentReport(
        s=s,
        q=ctx.q,
        D=ctx.D,
        value=math.fsum(values),
        tail_bound=math.fsum(tails),
        asymptotic_main=H_asymptotic(s, ctx.q),
        oracle_value=H_power_series(s, ctx) if oracle else None,
    )
    logger.debug("H(%d) at q=%d D=%d: %.17g +- %.3g", s, ctx.q, ctx.D,
                 report.value, report.tail_bound)
    return report


def _series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: len(a)]


def H_power_series(s: int, ctx: TruncationCtx) -> float:
    """
    s! [x^s] prod_n (1 + g_n(x))^{pi(n)}, with g_n(x) = sum_lam w_lam(n) x^lam / 2.

    Works through log and exp of truncated power series, independently of the
    set-partition expansion.
    """
    _check_moment(s)
    weights = _MomentWeights(ctx, s)
    log_total = np.zeros(s + 1)
    for i, count in enumerate(ctx.counts):
        g = np.zeros(s + 1)
        for lam in range(1, s + 1):
            g[lam] = weights.w[lam][i] / 2
        power = g.copy()
        log_term = np.zeros(s + 1)
        for k in range(1, s + 1):
            log_term += (-1) ** (k + 1) * power / k
            power = _series_mul(power, g)
        log_total += float(count) * log_term
    series = np.zeros(s + 1)
    series[0] = 1.0
    for n in range(1, s + 1):
        series[n] = sum(k * log_total[k] * series[n - k] for k in range(1, n + 1)) / n
    return math.factorial(s) * float(series[s])


def H_moment_bruteforce(s: int, ctx: TruncationCtx) -> float:
    """Nested loops over ordered tuples of distinct explicit primes."""
    _check_moment(s)
    degrees = ctx.prime_degrees()
    x = ctx.norms_inverse
    w = {lam: _numerators(lam, x) / (math.factorial(lam) * (1 + x)) for lam in range(1, s + 1)}
    total = []
    for r in range(1, s + 1):
        prefactor = math.factorial(s) / (2**r * math.factorial(r))
        for cuts in itertools.combinations(range(1, s), r - 1):
            bounds = (0,) + cuts + (s,)
            parts = [bounds[i + 1] - bounds[i] for i in range(r)]
            for tuple_ in itertools.permutations(range(len(degrees)), r):
                term = prefactor
                for lam, prime in zip(parts, tuple_):
                    term *= w[lam][degrees[prime] - 1]
                total.append(term)
    return math.fsum(total)


# --- characteristic function -----------------------------------------------

def _charfun_factors(t: float, ctx: TruncationCtx) -> np.ndarray:
    """g_n(t) = ((1 - q^{-n})^{-it} + (1 + q^{-n})^{-it} - 2) / (2 (1 + q^{-n}))."""
    x = ctx.norms_inverse
    u = -np.log1p(-x)
    v = np.log1p(x)

    def expm1_i(theta: np.ndarray) -> np.ndarray:
        # exp(i theta) - 1 without cancellation
        return -2 * np.sin(theta / 2) ** 2 + 1j * np.sin(theta)

    return (expm1_i(t * u) + expm1_i(-t * v)) / (2 * (1 + x))


def _complex_fsum(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))


def charfun_truncated(t: float, ctx: TruncationCtx, r_cap: int = 8) -> CharfunPoint:
    """
    phi(t) = 1 + sum_{r <= r_cap} (1/r!) sum_{P_i distinct} prod g_{P_i}(t).

    Distinct sums use the same set-partition expansion as H_moment, over the
    power sums p_k = sum_P g_P(t)^k. last_term is |r_cap-th term|.
    """
    if not (1 <= r_cap <= MAX_MOMENT):
        raise ValueError(f"r_cap must be between 1 and {MAX_MOMENT}, got {r_cap}")
    g = _charfun_factors(t, ctx)
    counts = ctx.count_array
    power_sums = {k: _complex_fsum(counts * g**k) for k in range(1, r_cap + 1)}
    total = complex(1.0, 0.0)
    term = complex(0.0, 0.0)
    for r in range(1, r_cap + 1):
        parts = []
        for partition in _set_partitions(r):
            product = complex(1.0, 0.0)
            for block in partition:
                product *= _block_sign(len(block)) * power_sums[len(block)]
            parts.append(product)
        term = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
        term /= math.factorial(r)
        total += term
    return CharfunPoint(
        t=t, real=total.real, imag=total.imag, last_term=abs(term), r_cap=r_cap, D=ctx.D
    )


def charfun_product(t: float, ctx: TruncationCtx) -> complex:
    """prod_n (1 + g_n(t))^{pi(n)}: the same truncated phi(t) with every r included."""
    g = _charfun_factors(t, ctx)
    # log(1 + g) from log1p of |1 + g|^2 - 1
    log_abs = 0.5 * np.log1p(2 * g.real + np.abs(g) ** 2)
    arg = np.arctan2(g.imag, 1 + g.real)
    counts = ctx.count_array
    exponent = complex(math.fsum((counts * log_abs).tolist()), math.fsum((counts * arg).tolist()))
    return complex(np.exp(exponent))


# --- certified inequalities ------------------------------------------------

@contextmanager
def _interval_precision(prec: int) -> Iterator[None]:
    previous = mpmath.iv.prec
    mpmath.iv.prec = prec
    try:
        yield
    finally:
        mpmath.iv.prec = previous


def _h_interval(lam: int, ctx: TruncationCtx):
    """Interval enclosing the untruncated h(lam)."""
    iv = mpmath.iv
    q = iv.mpf(ctx.q)
    total = iv.mpf(0)
    for n, count in enumerate(ctx.counts, start=1):
        x = 1 / q**n
        u = -iv.log(1 - x)
        v = iv.log(1 + x)
        if lam % 2 == 0:
            numerator = u**lam + v**lam
        else:
            numerator = -iv.log(1 - x * x) * sum(u**k * v ** (lam - 1 - k) for k in range(lam))
        total += iv.mpf(count) * numerator
    coefficient, exponent = _tail_shape(lam)
    ratio = q ** (1 - exponent)
    tail = iv.mpf(coefficient) * ratio ** (ctx.D + 1) / ((ctx.D + 1) * (1 - ratio))
    return total + tail * iv.mpf([0, 1])


def _certify(name: str, lhs, rhs, D: int, extra: bool = False) -> InequalityCheck:
    verdict = lhs < rhs
    if verdict is None:
        raise InconclusiveError(f"{name} is inconclusive at D = {D}; raise the truncation degree")
    return InequalityCheck(
        name=name,
        lhs_lower=float(lhs.a),
        lhs_upper=float(lhs.b),
        rhs_lower=float(rhs.a),
        rhs_upper=float(rhs.b),
        extra=extra,
    )


def lemma_inequalities(ctx: TruncationCtx, lambda_max: int = 8) -> LemmaReport:
    """
    Certify the h(lambda) inequalities with interval arithmetic:

    - h(2 + lam) < h(2) h(lam) for 2 <= lam <= lambda_max - 2
    - h(3) < h(2)^{3/2},  h(1) < h(2)^{1/2},  h(1) h(3) < h(2)^2

    Checks marked extra go further: the lam = 1 case of the first family,
    and h(lam) < h(2)^{lam/2} for 4 <= lam <= lambda_max.

    Raises InconclusiveError when the two sides overlap at this D.
    """
    if lambda_max < 3:
        raise ValueError(f"lambda_max must be >= 3, got {lambda_max}")
    checks = []
    with _interval_precision(INTERVAL_PREC):
        h = {lam: _h_interval(lam, ctx) for lam in range(1, lambda_max + 1)}
        root = mpmath.iv.sqrt(h[2])
        for lam in range(1, lambda_max - 1):
            name = f"h({lam + 2}) < h(2) h({lam})"
            checks.append(_certify(name, h[lam + 2], h[2] * h[lam], ctx.D, extra=lam == 1))
        checks.append(_certify("h(3) < h(2)^(3/2)", h[3], root**3, ctx.D))
        checks.append(_certify("h(1) < h(2)^(1/2)", h[1], root, ctx.D))
        checks.append(_certify("h(1) h(3) < h(2)^2", h[1] * h[3], h[2] ** 2, ctx.D))
        for lam in range(4, lambda_max + 1):
            checks.append(_certify(f"h({lam}) < h(2)^({lam}/2)", h[lam], root**lam, ctx.D,
                                   extra=True))
    report = LemmaReport(q=ctx.q, D=ctx.D, lambda_max=lambda_max, checks=checks)
    logger.info("h inequalities at q=%d D=%d: %d checks, all hold: %s",
                ctx.q, ctx.D, len(checks), report.all_hold)
    return report


def h2_bound_check(ctx: TruncationCtx) -> InequalityCheck:
    """h(2) + tail <= 10/q."""
    value, tail = h_lambda(2, ctx)
    limit = 10 / ctx.q
    return InequalityCheck(
        name="h(2) <= 10/q",
        lhs_lower=value,
        lhs_upper=value + tail,
        rhs_lower=limit,
        rhs_upper=limit,
    )


# --- large-s and large-q reporters ---------------------------------------------

def prop2_explicit_bound(s: int, q: int) -> float:
    """
    sum_{r=1}^{s} (sqrt(10) r / sqrt(q))^s / (2^r r!).

    Follows from prod h(lam_i) <= h(2)^{s/2} <= (10/q)^{s/2} and counting
    compositions weighted by the multinomial s!/prod lam_i! as at most r^s.
    """
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    scale = math.sqrt(10 / q)
    return math.fsum((scale * r) ** s / (2**r * math.factorial(r)) for r in range(1, s + 1))


def prop2_bound_report(s: int, q: int, ctx: Optional[TruncationCtx] = None) -> Prop2Report:
    """H(s) against (4 s log log s / (sqrt q log s))^s; the absolute constant is not known."""
    if s < 4:
        raise ValueError(f"s must be >= 4, got {s}")
    ctx = ctx or TruncationCtx(q=q, D=6)
    if ctx.q != q:
        raise ValueError(f"context is for q = {ctx.q}, not {q}")
    value = H_moment(s, ctx).value
    bracket = (4 * s * math.log(math.log(s)) / (math.sqrt(q) * math.log(s))) ** s
    return Prop2Report(
        s=s,
        q=q,
        D=ctx.D,
        value=value,
        bracket=bracket,
        ratio=value / bracket,
        explicit_bound=prop2_explicit_bound(s, q),
    )


def prop3_row(s: int, ctx: TruncationCtx) -> Prop3Row:
    """q^{s/2} H(s) against its Gaussian limit; allowed = 10 max(1, limit) / sqrt(q)."""
    value = H_moment(s, ctx).value
    scale = float(ctx.q) ** (s / 2)
    limit = H_asymptotic(s, ctx.q) * scale
    return Prop3Row(
        q=ctx.q,
        s=s,
        D=ctx.D,
        scaled_value=value * scale,
        limit=limit,
        deviation=abs(value * scale - limit),
        allowed=10 * max(1.0, limit) / math.sqrt(ctx.q),
    )


def prop3_grid(
    qs: Sequence[int] = (101, 401, 1009),
    D: int = 6,
    s_values: Sequence[int] = (1, 2, 3, 4),
) -> list[Prop3Row]:
    return [prop3_row(s, TruncationCtx(q=q, D=D)) for q in qs for s in s_values]
