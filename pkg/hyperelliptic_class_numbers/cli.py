"""
Command-line entry point: ``hyperjac <subcommand> [flags]``.

Every subcommand produces one table (CSV by default, JSON with --format json)
and a run manifest. Exit codes: 2 for invalid flags or inputs, 1 when an
asserted invariant fails, 0 otherwise.
"""

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from pydantic import ValidationError

from . import __version__
from .config import config
from .engine.bounds import thm1_bound, verify_curve, weil_interval
from .engine.experiments import run_hcheck
from .engine.family import charfun_from_rows, lemma21_check, lemma22_check, summary_rows, sweep
from .engine.ffield import FieldCtx, enumerate_monic, monic_irreducibles
from .engine.lfunc import (
    curve_record,
    explicit_formula_check,
    functional_equation_check,
    l_polynomial,
    nf_statistic,
)
from .engine.moments import H_moment, TruncationCtx, charfun_product, charfun_truncated
from .engine.summary import SweepConfig, SweepSummary
from .exceptions import InconclusiveError, InvariantViolation
from .models.base import LPolyMethod, OutputFormat, PolyFilter, SweepMode
from .models.curves import CurveRecord
from .models.reports import RunManifest
from .output import (
    RecordWriter,
    emit,
    fmt_float,
    read_records,
    read_table,
    render_table,
    write_manifest,
)

logger = logging.getLogger(__name__)


@dataclass
class CommandOutput:
    """Table produced by a subcommand; failed marks an asserted invariant that did not hold."""
    header: list[str]
    rows: list[list[str]]
    failed: bool = False


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from exc


# --- subcommands -------------------------------------------------------------

def cmd_lpoly(args: argparse.Namespace) -> CommandOutput:
    f = FieldCtx(args.q).parse(args.poly)
    if args.d is not None and f.degree != args.d:
        raise ValueError(f"--d {args.d} does not match deg F = {f.degree}")
    cross_check = args.method == "all"
    methods = list(LPolyMethod) if cross_check else [LPolyMethod(args.method)]
    if cross_check and sum(args.q**n for n in range(f.degree)) > config.charsum_budget:
        logger.warning("charsum skipped: %d enumeration steps exceed the budget",
                       sum(args.q**n for n in range(f.degree)))
        methods.remove(LPolyMethod.CHARSUM)

    rows, results = [], {}
    for method in methods:
        started = time.perf_counter()
        lpoly = l_polynomial(f, method)
        elapsed = time.perf_counter() - started
        results[method] = lpoly
        rows.append([
            method.value,
            " ".join(str(a) for a in lpoly.coeffs),
            str(lpoly.class_number),
            fmt_float(nf_statistic(lpoly)),
            fmt_float(elapsed),
        ])

    failed = False
    if cross_check:
        if len({lp.coeffs for lp in results.values()}) != 1:
            raise InvariantViolation(f"L-polynomial paths disagree for {f}")
        lpoly = results[LPolyMethod.NEWTON]
        for n in range(1, lpoly.g + 1):
            if not explicit_formula_check(f, lpoly, n):
                raise InvariantViolation(f"explicit formula fails at n = {n} for {f}")
        if not functional_equation_check(f, lpoly):
            raise InvariantViolation(f"functional equation check fails for {f}")
        verdict = verify_curve(curve_record(f, lpoly))
        for message in verdict.violations:
            logger.error("F = %s: %s", f, message)
        failed = not verdict.passed
    return CommandOutput(["method", "coeffs", "class_number", "n_f", "seconds"], rows, failed)


def _sweep_config(args: argparse.Namespace) -> SweepConfig:
    return SweepConfig(
        q=args.q,
        d=args.d,
        mode=SweepMode(args.mode),
        sample_count=args.samples,
        rng_seed=args.seed,
        worker_count=args.threads,
        method=LPolyMethod(args.method),
        r_max=args.r_max,
        psi_grid=args.psi,
        t_grid=args.t_grid,
        cdf_bins=args.bins,
    )


def _run_sweep(args: argparse.Namespace, sink: Optional[Callable] = None) -> SweepSummary:
    cfg = _sweep_config(args)
    if args.records_out is None:
        return sweep(cfg, record_sink=sink)

    with RecordWriter(args.records_out, cfg.genus) as writer:
        def both(record: CurveRecord) -> None:
            writer(record)
            if sink is not None:
                sink(record)
        return sweep(cfg, record_sink=both)


def cmd_sweep(args: argparse.Namespace) -> CommandOutput:
    summary = _run_sweep(args)
    rows = [list(row) for row in summary_rows(summary)]
    return CommandOutput(["key", "value"], rows, failed=summary.violations > 0)


def cmd_verify(args: argparse.Namespace) -> CommandOutput:
    checked, failures = 0, []

    def check(record: CurveRecord) -> None:
        nonlocal checked
        checked += 1
        verdict = verify_curve(record)
        failures.extend(f"F={record.poly_text}: {m}" for m in verdict.violations)

    if args.records is not None:
        for record in read_records(args.records):
            check(record)
        sweep_violations = 0
    else:
        if args.q is None or args.d is None:
            raise ValueError("verify needs --records or both --q and --d")
        sweep_violations = _run_sweep(args, sink=check).violations

    rows = [
        ["curves", str(checked)],
        ["failed_checks", str(len(failures))],
        ["sweep_violations", str(sweep_violations)],
    ]
    rows += [[f"violation_{i}", message] for i, message in enumerate(failures[:10])]
    return CommandOutput(["key", "value"], rows, failed=bool(failures) or sweep_violations > 0)


def cmd_moments(args: argparse.Namespace) -> CommandOutput:
    ctx = TruncationCtx(q=args.q, D=args.trunc_degree)
    rows = []
    for s in args.s:
        report = H_moment(s, ctx, oracle=args.oracle)
        rows.append([
            str(report.s),
            str(report.D),
            fmt_float(report.value),
            fmt_float(report.tail_bound),
            fmt_float(report.asymptotic_main),
            "" if report.ratio is None else fmt_float(report.ratio),
            "" if report.oracle_value is None else fmt_float(report.oracle_value),
        ])
    header = ["s", "D", "value", "tail_bound", "asymptotic_main", "ratio", "oracle"]
    return CommandOutput(header, rows)


def cmd_charfun(args: argparse.Namespace) -> CommandOutput:
    ctx = TruncationCtx(q=args.q, D=args.trunc_degree)
    empirical = {}
    if args.compare_sweep is not None:
        table = read_table(args.compare_sweep)
        empirical = charfun_from_rows([(row["key"], row["value"]) for row in table])

    header = ["t", "D", "real", "imag", "last_term", "product_real", "product_imag"]
    if args.compare_sweep is not None:
        header += ["empirical_real", "empirical_imag", "distance"]
    rows = []
    for t in args.t_grid:
        point = charfun_truncated(t, ctx, args.r_cap)
        product = charfun_product(t, ctx)
        row = [
            fmt_float(t), str(ctx.D), fmt_float(point.real), fmt_float(point.imag),
            fmt_float(point.last_term), fmt_float(product.real), fmt_float(product.imag),
        ]
        if args.compare_sweep is not None:
            if t not in empirical:
                raise ValueError(f"t = {t} is not tracked by the compared sweep")
            value = empirical[t]
            row += [fmt_float(value.real), fmt_float(value.imag),
                    fmt_float(abs(value - point.value))]
        rows.append(row)
    return CommandOutput(header, rows)


def cmd_bounds(args: argparse.Namespace) -> CommandOutput:
    lo, hi = weil_interval(args.g, args.q)
    row = [str(args.g), str(args.q), str(args.N), fmt_float(thm1_bound(args.g, args.q, args.N)),
           fmt_float(lo), fmt_float(hi)]
    return CommandOutput(["g", "q", "N", "thm1_bound", "weil_lo", "weil_hi"], [row])


def _check_row(section: str, name: str, q: int, D: int, lhs: float, rhs: float,
               ok: bool) -> list[str]:
    return [section, name, str(q), str(D), fmt_float(lhs), fmt_float(rhs),
            fmt_float(rhs - lhs), str(ok).lower()]


def cmd_hcheck(args: argparse.Namespace) -> CommandOutput:
    report = run_hcheck(
        q_grid=args.q,
        D=args.trunc_degree,
        lambda_max=args.lambda_max,
        prop3_qs=args.prop3_q,
    )
    rows = []
    for lemma in report.lemma_reports:
        for check in lemma.checks:
            rows.append(_check_row("h_inequality", check.name, lemma.q, lemma.D,
                                   check.lhs_upper, check.rhs_lower, check.holds))
    for lemma, check in zip(report.lemma_reports, report.h2_checks):
        rows.append(_check_row("h2_bound", check.name, lemma.q, lemma.D,
                               check.lhs_upper, check.rhs_lower, check.holds))
    for prop2 in report.prop2_reports:
        rows.append(_check_row("large_s", f"H({prop2.s}) explicit bound", prop2.q, prop2.D,
                               prop2.value, prop2.explicit_bound, prop2.explicit_ok))
        rows.append(_check_row("large_s", f"H({prop2.s}) / bracket", prop2.q, prop2.D,
                               prop2.ratio, 10.0, prop2.ratio <= 10))
    for row in report.prop3_rows:
        rows.append(_check_row("large_q", f"q^({row.s}/2) H({row.s}) - limit", row.q, row.D,
                               row.deviation, row.allowed, row.holds))
    failed = not report.passed

    for q in args.q:
        for d in args.family_d:
            for n in (1, 2):
                for f in monic_irreducibles(q, n):
                    result = lemma21_check(f, d)
                    rows.append(_check_row("character_average", f"f={f.text()}", q, d,
                                           abs(result.average), result.bound, result.holds))
                    failed |= not result.holds
            for n in (1, 2):
                for h in enumerate_monic(q, n, PolyFilter.SQUAREFREE):
                    density = lemma22_check(h, d)
                    rows.append(_check_row("coprime_density", f"h={h.text()}", q, d,
                                           density.normalized_deviation, 10.0,
                                           density.within_sanity_bound))
                    failed |= not density.within_sanity_bound
    header = ["section", "name", "q", "D", "lhs", "rhs", "margin", "holds"]
    return CommandOutput(header, rows, failed)


# --- parser ----------------------------------------------------------------

def _add_sweep_flags(p: argparse.ArgumentParser, mode: SweepMode, required: bool = True) -> None:
    p.add_argument("--q", type=int, required=required, help="Odd prime field size")
    p.add_argument("--d", type=int, required=required, help="Degree of F")
    p.add_argument("--mode", choices=[m.value for m in SweepMode], default=mode.value)
    p.add_argument("--samples", type=int, default=1000, help="Samples in sample mode")
    p.add_argument("--seed", type=int, default=0, help="64-bit sampling seed")
    p.add_argument("--threads", type=int, default=1, help="Worker processes")
    p.add_argument("--method", choices=[m.value for m in LPolyMethod],
                   default=LPolyMethod.NEWTON.value)
    p.add_argument("--r-max", type=int, default=4, help="Highest moment tracked")
    p.add_argument("--psi", type=_float_list, default=(1.0, 2.0, 3.0, 4.0),
                   help="Tail thresholds, comma-separated")
    p.add_argument("--t-grid", type=_float_list, default=(0.5, 1.0, 2.0),
                   help="Characteristic function points, comma-separated")
    p.add_argument("--bins", type=int, default=512, help="Histogram bins for the KS statistic")
    p.add_argument("--records-out", type=Path, default=None, help="Per-curve CSV")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=None, help="Output file (default stdout)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat],
                        default=OutputFormat.CSV.value)
    common.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])

    parser = argparse.ArgumentParser(
        prog="hyperjac",
        description="Class numbers of hyperelliptic curves over F_q and their statistics",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("lpoly", parents=[common], help="L-polynomial of one curve")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--poly", required=True, help='Ascending coefficients, e.g. "1,2,0,1"')
    p.add_argument("--method", choices=[m.value for m in LPolyMethod] + ["all"],
                   default=LPolyMethod.NEWTON.value)
    p.set_defaults(func=cmd_lpoly)

    p = sub.add_parser("sweep", parents=[common], help="Statistics over a whole family")
    _add_sweep_flags(p, SweepMode.EXHAUSTIVE)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("sample", parents=[common], help="Statistics over seeded samples")
    _add_sweep_flags(p, SweepMode.SAMPLE)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="Bound checks on every curve")
    _add_sweep_flags(p, SweepMode.EXHAUSTIVE, required=False)
    p.add_argument("--records", type=Path, default=None, help="Verify a records CSV instead")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("moments", parents=[common], help="Limiting moments H(s)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--s", type=_int_list, default=(1, 2, 3, 4), help="Moments, comma-separated")
    p.add_argument("--trunc-degree", type=int, default=12)
    p.add_argument("--oracle", action="store_true", help="Add the power-series value")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("charfun", parents=[common], help="Truncated characteristic function")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--t-grid", type=_float_list, default=(0.5, 1.0, 2.0))
    p.add_argument("--trunc-degree", type=int, default=12)
    p.add_argument("--r-cap", type=int, default=8)
    p.add_argument("--compare-sweep", type=Path, default=None,
                   help="Summary file of a sweep to compare against")
    p.set_defaults(func=cmd_charfun)

    p = sub.add_parser("bounds", parents=[common], help="Class number bound and Weil interval")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--N", type=int, default=2, help="Degree of the Galois cover")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("hcheck", parents=[common], help="Certified analytic inequalities")
    p.add_argument("--q", type=_int_list, default=(3, 5, 7, 101))
    p.add_argument("--trunc-degree", type=int, default=12)
    p.add_argument("--lambda-max", type=int, default=8)
    p.add_argument("--prop3-q", type=_int_list, default=(101, 401, 1009))
    p.add_argument("--family-d", type=_int_list, default=(),
                   help="Also check character averages over these degrees")
    p.set_defaults(func=cmd_hcheck)
    return parser


def _manifest_flags(args: argparse.Namespace) -> dict[str, Any]:
    flags = {}
    for key, value in sorted(vars(args).items()):
        if key == "func":
            continue
        if isinstance(value, Path):
            value = str(value)
        elif isinstance(value, Enum):
            value = value.value
        elif isinstance(value, tuple):
            value = list(value)
        flags[key] = value
    return flags


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=args.log_level or config.log_level.upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    started = time.perf_counter()
    try:
        result = args.func(args)
    except (ValidationError, ValueError, InconclusiveError) as exc:
        print(f"hyperjac {args.subcommand}: {exc}", file=sys.stderr)
        return 2
    except (InvariantViolation, AssertionError) as exc:
        print(f"hyperjac {args.subcommand}: invariant violated: {exc}", file=sys.stderr)
        return 1

    text = render_table(result.header, result.rows, OutputFormat(args.format))
    digest = emit(text, args.out, sys.stdout)
    manifest = RunManifest(
        subcommand=args.subcommand,
        flags=_manifest_flags(args),
        seed=getattr(args, "seed", None),
        version=__version__,
        wall_time_seconds=time.perf_counter() - started,
        output_checksum=digest,
    )
    write_manifest(manifest, args.out)
    return 1 if result.failed else 0


if __name__ == "__main__":
    sys.exit(main())
