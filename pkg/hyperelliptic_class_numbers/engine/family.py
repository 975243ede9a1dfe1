"""
Exhaustive sweeps and seeded sampling over the family of monic squarefree F.

Work is split into shards of enumeration indices (or sample numbers) whose
boundaries depend only on the configuration. Each shard yields a partial
SweepSummary; partials are merged in shard order, so results are identical
for any number of worker processes.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict
from typing import Callable, Optional

import numpy as np
from scipy import stats

from ..config import config
from ..exceptions import BudgetExceededError
from ..models.base import LPolyMethod, SweepMode
from ..models.curves import CurveRecord
from ..models.reports import Lemma21Report, Lemma22Report
from .bounds import verify_class_number
from .ffield import (
    FqPoly,
    ResidueRing,
    factor_squarefree,
    is_irreducible,
    is_squarefree,
    monic_block,
    squarefree_flags,
)
from .lfunc import (
    RH_TOLERANCE,
    charsum_feasible,
    coefficient_root_deviation,
    complete_functional_equation,
    genus,
    l_polynomial,
    newton_batch,
    newton_coefficients,
    nf_from_class_number,
    pointcount_power_sums,
)
from .quadchar import shared_symbol_cache
from .summary import HIST_RANGE, SweepConfig, SweepSummary

logger = logging.getLogger(__name__)

# Rows handed to the vectorised symbol code at once
_BLOCK_ROWS = 4096

# Samples per shard in sample mode
SAMPLE_SHARD = 256

RecordSink = Callable[[CurveRecord], None]


def shard_ranges(cfg: SweepConfig) -> list[tuple[int, int]]:
    """Index ranges [start, stop) covering the sweep, fixed by the configuration alone."""
    if cfg.mode == SweepMode.EXHAUSTIVE:
        total, size = cfg.q**cfg.d, config.shard_size
    else:
        total, size = cfg.sample_count, SAMPLE_SHARD
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def _check_budget(cfg: SweepConfig) -> None:
    if cfg.mode == SweepMode.EXHAUSTIVE and cfg.q**cfg.d > config.exhaustive_budget:
        raise BudgetExceededError(
            f"exhaustive sweep over q^d = {cfg.q**cfg.d} polynomials exceeds the budget "
            f"{config.exhaustive_budget}"
        )
    if cfg.method == LPolyMethod.CHARSUM and not charsum_feasible(cfg.q, cfg.d):
        raise BudgetExceededError(
            f"charsum over the q = {cfg.q}, d = {cfg.d} family exceeds the budget "
            f"{config.charsum_budget}; use newton or pointcount"
        )


def _sample_rows(cfg: SweepConfig, start: int, stop: int) -> np.ndarray:
    """
    Uniform monic squarefree F by rejection; sample i draws from its own
    substream seeded by (rng_seed, i).
    """
    q, d = cfg.q, cfg.d
    use_sieve = q**d <= config.exhaustive_budget
    flags = squarefree_flags(q, d) if use_sieve else None
    weights = q ** np.arange(d, dtype=np.int64)
    rows = np.ones((stop - start, d + 1), dtype=np.int64)
    for offset, i in enumerate(range(start, stop)):
        rng = np.random.default_rng([cfg.rng_seed, i])
        while True:
            coeffs = rng.integers(0, q, size=d)
            if flags is not None:
                accepted = bool(flags[int(coeffs @ weights)])
            else:
                accepted = is_squarefree(FqPoly(q, tuple(int(c) for c in coeffs) + (1,)))
            if accepted:
                rows[offset, :d] = coeffs
                break
    return rows


def _exhaustive_rows(cfg: SweepConfig, start: int, stop: int) -> np.ndarray:
    block = monic_block(cfg.q, cfg.d, start, stop)
    return block[squarefree_flags(cfg.q, cfg.d)[start:stop]]


def _power_sums_and_coeffs(
    cfg: SweepConfig, polys: np.ndarray
) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    q, g = cfg.q, cfg.genus
    if cfg.method == LPolyMethod.NEWTON:
        return newton_batch(polys, q, shared_symbol_cache(q, g))
    if cfg.method == LPolyMethod.POINTCOUNT:
        sums = pointcount_power_sums(polys, q, g)
        coeffs = [complete_functional_equation(newton_coefficients(row, g), q, g)
                  for row in sums.tolist()]
        return sums, coeffs
    lpolys = [l_polynomial(FqPoly(q, tuple(int(c) for c in row)), LPolyMethod.CHARSUM)
              for row in polys]
    sums = np.array([lp.power_sums for lp in lpolys], dtype=np.int64).reshape(len(lpolys), g)
    return sums, [lp.coeffs for lp in lpolys]


def _process_rows(cfg: SweepConfig, polys: np.ndarray, summary: SweepSummary,
                  records: Optional[list[CurveRecord]]) -> None:
    q, d, g = cfg.q, cfg.d, cfg.genus
    even = d % 2 == 0
    for lo in range(0, polys.shape[0], _BLOCK_ROWS):
        block = polys[lo:lo + _BLOCK_ROWS]
        sums, coeffs = _power_sums_and_coeffs(cfg, block)
        nf = np.empty(len(coeffs))
        for i, (row_sums, row_coeffs) in enumerate(zip(sums.tolist(), coeffs)):
            h = sum(row_coeffs)
            problems = verify_class_number(h, g, q)
            if any(s * s > 4 * g * g * q**n for n, s in enumerate(row_sums, start=1)):
                problems.append("power sum exceeds 2g q^{n/2}")
            if cfg.check_rh:
                deviation = coefficient_root_deviation(row_coeffs, q)
                summary.rh_max_deviation = max(summary.rh_max_deviation, deviation)
                if deviation > RH_TOLERANCE:
                    problems.append(f"root modulus off by {deviation:.3g}")
            if problems:
                text = ",".join(str(int(c)) for c in block[i])
                for problem in problems:
                    summary.record_violation(f"F={text}: {problem}")
            nf[i] = nf_from_class_number(h, g, q, even) if h >= 1 else math.nan
            if records is not None:
                records.append(CurveRecord(
                    q=q, d=d, g=g,
                    f_coeffs=tuple(int(c) for c in block[i]),
                    class_number=h,
                    n_f=float(nf[i]),
                    power_sums=tuple(row_sums),
                ))
        summary.add_values(nf[~np.isnan(nf)])


def run_shard(cfg: SweepConfig, start: int, stop: int,
              want_records: bool = False) -> tuple[SweepSummary, Optional[list[CurveRecord]]]:
    """Summarise one shard; records (if wanted) come back in index order."""
    summary = SweepSummary.empty(cfg)
    records: Optional[list[CurveRecord]] = [] if want_records else None
    if cfg.mode == SweepMode.EXHAUSTIVE:
        polys = _exhaustive_rows(cfg, start, stop)
    else:
        polys = _sample_rows(cfg, start, stop)
    _process_rows(cfg, polys, summary, records)
    return summary, records


def _run_shard_task(args: tuple) -> tuple[int, SweepSummary, Optional[list[CurveRecord]]]:
    """ProcessPoolExecutor entry point: (shard_id, config_dict, start, stop, want_records)."""
    shard_id, cfg_dict, start, stop, want_records = args
    summary, records = run_shard(SweepConfig(**cfg_dict), start, stop, want_records)
    return shard_id, summary, records


def sweep(
    cfg: SweepConfig,
    record_sink: Optional[RecordSink] = None,
    progress: Optional[Callable[[int, int], None]] = None,
    should_stop: Optional[Callable[[], bool]] = None,
) -> SweepSummary:
    """
    Visit every monic squarefree F of degree d (or cfg.sample_count samples).

    record_sink receives CurveRecords in enumeration order; progress gets
    (shards_done, shards_total) and should_stop allows cancellation.
    """
    _check_budget(cfg)
    if record_sink is not None and cfg.d > 7:
        logger.warning("per-curve records requested for d = %d; expect a large stream", cfg.d)
    shards = shard_ranges(cfg)
    workers = min(cfg.worker_count, config.max_workers, max(1, len(shards)))
    want_records = record_sink is not None
    logger.info("sweep q=%d d=%d mode=%s: %d shards on %d workers",
                cfg.q, cfg.d, cfg.mode.value, len(shards), workers)

    partials: dict[int, tuple[SweepSummary, Optional[list[CurveRecord]]]] = {}
    started = time.perf_counter()

    def finish(shard_id: int, summary: SweepSummary,
               records: Optional[list[CurveRecord]]) -> None:
        partials[shard_id] = (summary, records)
        start, stop = shards[shard_id]
        logger.info("shard %d [%d, %d): %d curves, %.1fs elapsed", shard_id, start, stop,
                    summary.count, time.perf_counter() - started)
        if progress is not None:
            progress(len(partials), len(shards))

    if workers == 1:
        for shard_id, (start, stop) in enumerate(shards):
            if should_stop is not None and should_stop():
                break
            summary, records = run_shard(cfg, start, stop, want_records)
            finish(shard_id, summary, records)
    else:
        cfg_dict = asdict(cfg)
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [
                executor.submit(_run_shard_task, (i, cfg_dict, start, stop, want_records))
                for i, (start, stop) in enumerate(shards)
            ]
            for future in as_completed(futures):
                if should_stop is not None and should_stop():
                    executor.shutdown(wait=False, cancel_futures=True)
                    break
                shard_id, summary, records = future.result()
                finish(shard_id, summary, records)

    total = SweepSummary.empty(cfg)
    for shard_id in sorted(partials):
        summary, records = partials[shard_id]
        total = total.merged(summary)
        if record_sink is not None and records is not None:
            for record in records:
                record_sink(record)
    if cfg.mode == SweepMode.EXHAUSTIVE and len(partials) == len(shards):
        if total.count != cfg.family_size:
            total.record_violation(
                f"visited {total.count} curves, expected {cfg.family_size}"
            )
    return total


# --- reading a summary ---------------------------------------------------

def _require_count(summary: SweepSummary) -> None:
    if summary.count == 0:
        raise ValueError("summary is empty")


def empirical_moment(summary: SweepSummary, r: int) -> float:
    """sum N_F^r / count."""
    if r == 0:
        return 1.0
    if not (1 <= r <= summary.r_max):
        raise ValueError(f"moment {r} not tracked (r_max = {summary.r_max})")
    _require_count(summary)
    return summary.power_sums[r - 1].value / summary.count


def tail_count(summary: SweepSummary, psi: float) -> int:
    """#{F : |N_F| >= psi}."""
    if psi in summary.psi_grid:
        return summary.tail_counts[summary.psi_grid.index(psi)]
    if psi <= 0:
        return summary.count
    if psi > max(abs(summary.nf_min), abs(summary.nf_max)):
        return 0
    raise ValueError(f"psi = {psi} is not in the tracked grid {summary.psi_grid}")


def tail_bound_reference(psi: float, q: int) -> Optional[float]:
    """exp(-(psi/2) log(q log psi)); undefined for psi <= 1."""
    if psi <= 1:
        return None
    return math.exp(-(psi / 2) * math.log(q * math.log(psi)))


def empirical_charfun(summary: SweepSummary, t: float) -> complex:
    """sum exp(i t N_F) / count."""
    if t == 0:
        return complex(1.0, 0.0)
    _require_count(summary)
    if t in summary.t_grid:
        i = summary.t_grid.index(t)
        return complex(summary.cos_sums[i].value, summary.sin_sums[i].value) / summary.count
    if -t in summary.t_grid:
        return empirical_charfun(summary, -t).conjugate()
    raise ValueError(f"t = {t} is not in the tracked grid {summary.t_grid}")


def scaled_mean(summary: SweepSummary) -> float:
    """Mean of sqrt(q) N_F."""
    return math.sqrt(summary.q) * empirical_moment(summary, 1)


def scaled_variance(summary: SweepSummary) -> float:
    """Variance of sqrt(q) N_F."""
    m1 = empirical_moment(summary, 1)
    return summary.q * (empirical_moment(summary, 2) - m1 * m1)


def ks_statistic(summary: SweepSummary) -> float:
    """
    sup |F_emp - Phi| of sqrt(q) N_F, read at the histogram edges.

    F_emp at an edge counts values strictly below it. The error against the
    exact statistic is at most one bin's mass plus the bin width times phi(0).
    """
    _require_count(summary)
    edges = summary.hist_edges
    below = summary.hist_underflow + np.concatenate(([0], np.cumsum(summary.hist_counts)))
    empirical = below / summary.count
    return float(np.max(np.abs(empirical - stats.norm.cdf(edges))))


# --- summary rows --------------------------------------------------------

def _fmt(value: float) -> str:
    return format(value, ".17g")


def summary_rows(summary: SweepSummary) -> list[tuple[str, str]]:
    """key,value rows: counts and moments first, then tails, charfun, histogram."""
    rows: list[tuple[str, str]] = [
        ("q", str(summary.q)),
        ("d", str(summary.d)),
        ("g", str(genus(summary.d))),
        ("mode", summary.mode.value),
        ("count", str(summary.count)),
        ("violations", str(summary.violations)),
        ("rh_max_deviation", _fmt(summary.rh_max_deviation)),
    ]
    if summary.count == 0:
        return rows
    rows += [("nf_min", _fmt(summary.nf_min)), ("nf_max", _fmt(summary.nf_max))]
    for r in range(1, summary.r_max + 1):
        rows.append((f"moment_{r}", _fmt(empirical_moment(summary, r))))
    rows += [
        ("scaled_mean", _fmt(scaled_mean(summary))),
        ("scaled_variance", _fmt(scaled_variance(summary))),
        ("ks", _fmt(ks_statistic(summary))),
    ]
    for psi, count in zip(summary.psi_grid, summary.tail_counts):
        rows.append((f"tail_count@{_fmt(psi)}", str(count)))
        rows.append((f"tail_ratio@{_fmt(psi)}", _fmt(count / summary.count)))
        reference = tail_bound_reference(psi, summary.q)
        if reference is not None:
            rows.append((f"tail_reference@{_fmt(psi)}", _fmt(reference)))
    for t in summary.t_grid:
        value = empirical_charfun(summary, t)
        rows.append((f"charfun_re@{_fmt(t)}", _fmt(value.real)))
        rows.append((f"charfun_im@{_fmt(t)}", _fmt(value.imag)))
    rows.append((f"hist_below@{_fmt(-HIST_RANGE)}", str(summary.hist_underflow)))
    edges = summary.hist_edges
    for lo, count in zip(edges[:-1], summary.hist_counts.tolist()):
        rows.append((f"hist@{_fmt(float(lo))}", str(count)))
    rows.append((f"hist_above@{_fmt(HIST_RANGE)}", str(summary.hist_overflow)))
    for i, message in enumerate(summary.violation_examples):
        rows.append((f"violation_{i}", message))
    return rows


def charfun_from_rows(rows: list[tuple[str, str]]) -> dict[float, complex]:
    """Empirical charfun values keyed by t, read back from summary rows."""
    real: dict[float, float] = {}
    imag: dict[float, float] = {}
    for key, value in rows:
        if key.startswith("charfun_re@"):
            real[float(key.split("@", 1)[1])] = float(value)
        elif key.startswith("charfun_im@"):
            imag[float(key.split("@", 1)[1])] = float(value)
    return {t: complex(real[t], imag.get(t, 0.0)) for t in sorted(real)}


# --- character average checks --------------------------------------------

def _family_rows(q: int, d: int, include_non_squarefree: bool) -> np.ndarray:
    block = monic_block(q, d, 0, q**d)
    if include_non_squarefree:
        return block
    return block[squarefree_flags(q, d)]


def lemma21_check(f: FqPoly, d: int, include_non_squarefree: bool = False) -> Lemma21Report:
    """
    |sum_F (F/f)| / #family against 2^{deg f - 1} / ((1 - 1/q) q^{d/2}).

    include_non_squarefree averages over all monic F instead, where the
    symbols balance exactly.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if not f.is_monic or not is_irreducible(f):
        raise ValueError(f"{f} is not a monic irreducible polynomial")
    q = f.q
    if q**d > config.exhaustive_budget:
        raise BudgetExceededError(f"q^d = {q**d} exceeds the exhaustive budget")
    ring = ResidueRing(f, build_table=True)
    rows = _family_rows(q, d, include_non_squarefree)
    symbols = ring.symbol_table[ring.indices(ring.reduce_rows(rows))]
    total = int(symbols.sum(dtype=np.int64))
    bound = 2 ** (f.degree - 1) / ((1 - 1 / q) * q ** (d / 2))
    return Lemma21Report(
        q=q,
        d=d,
        f_coeffs=f.coeffs,
        family_size=len(rows),
        symbol_sum=total,
        average=total / len(rows),
        bound=bound,
    )


def lemma22_check(h: FqPoly, d: int) -> Lemma22Report:
    """Density of F coprime to h against prod_{P | h} (1 + 1/|P|)^{-1}."""
    q = h.q
    if q**d > config.exhaustive_budget:
        raise BudgetExceededError(f"q^d = {q**d} exceeds the exhaustive budget")
    factors = factor_squarefree(h)
    rows = _family_rows(q, d, include_non_squarefree=False)
    coprime = np.ones(len(rows), dtype=bool)
    main = 1.0
    for p in factors:
        residues = ResidueRing(p).reduce_rows(rows)
        coprime &= residues.any(axis=1)
        main /= 1 + q ** (-p.degree)
    divisors = 2 ** len(factors)
    density = float(coprime.sum()) / len(rows)
    return Lemma22Report(
        q=q,
        d=d,
        h_coeffs=h.coeffs,
        family_size=len(rows),
        coprime_count=int(coprime.sum()),
        density=density,
        main_term=main,
        divisor_count=divisors,
        normalized_deviation=abs(density - main) * q ** (d / 2) / divisors,
    )

