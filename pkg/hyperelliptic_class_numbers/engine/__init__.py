"""
Computational core for hyperelliptic class number statistics.

Components:
- ffield: polynomial arithmetic over F_q, enumeration, residue rings
- quadchar: quadratic residue symbols and Lambda-weighted character sums
- lfunc: L-polynomials by three independent paths, class numbers, N_F
- bounds: Weil interval and the class number bound, per-curve verdicts
- summary: sweep configuration and the mergeable streaming summary
- family: sharded exhaustive sweeps, seeded sampling, empirical statistics
- moments: limiting moments H(s), the characteristic function, h inequalities
- experiments: reports joining sweeps with the analytic limits
"""

from .ffield import (
    FieldCtx,
    FqPoly,
    ResidueRing,
    degree_weighted_prime_identity,
    enumerate_monic,
    factor_squarefree,
    is_irreducible,
    is_squarefree,
    monic_irreducibles,
    poly_arith,
    poly_from_index,
    poly_index,
    prime_count_exact,
)

from .quadchar import (
    SymbolTableCache,
    char_prime_power,
    infinite_place_value,
    lambda_char_sum,
    legendre_symbol,
)

from .lfunc import (
    class_number,
    curve_record,
    explicit_formula_check,
    functional_equation_check,
    l_polynomial,
    nf_statistic,
    power_sums_from_coefficients,
    rh_deviation,
)

from .bounds import (
    in_weil_interval,
    thm1_bound,
    verify_curve,
    weil_exact_endpoints,
    weil_interval,
)

from .summary import (
    SweepConfig,
    SweepSummary,
)

from .family import (
    empirical_charfun,
    empirical_moment,
    ks_statistic,
    lemma21_check,
    lemma22_check,
    summary_rows,
    sweep,
    tail_bound_reference,
    tail_count,
)

from .moments import (
    H_asymptotic,
    H_moment,
    H_moment_bruteforce,
    H_power_series,
    TruncationCtx,
    charfun_product,
    charfun_truncated,
    eta_tau,
    h_lambda,
    h_leading,
    lemma_inequalities,
    prop2_bound_report,
    prop3_grid,
    u_v,
)

from .experiments import (
    compare_charfun,
    gaussian_report,
    moment_convergence,
    run_hcheck,
)

__all__ = [
    # Finite fields
    "FieldCtx",
    "FqPoly",
    "ResidueRing",
    "degree_weighted_prime_identity",
    "enumerate_monic",
    "factor_squarefree",
    "is_irreducible",
    "is_squarefree",
    "monic_irreducibles",
    "poly_arith",
    "poly_from_index",
    "poly_index",
    "prime_count_exact",

    # Quadratic characters
    "SymbolTableCache",
    "char_prime_power",
    "infinite_place_value",
    "lambda_char_sum",
    "legendre_symbol",

    # L-polynomials
    "class_number",
    "curve_record",
    "explicit_formula_check",
    "functional_equation_check",
    "l_polynomial",
    "nf_statistic",
    "power_sums_from_coefficients",
    "rh_deviation",

    # Bounds
    "in_weil_interval",
    "thm1_bound",
    "verify_curve",
    "weil_exact_endpoints",
    "weil_interval",

    # Families
    "SweepConfig",
    "SweepSummary",
    "empirical_charfun",
    "empirical_moment",
    "ks_statistic",
    "lemma21_check",
    "lemma22_check",
    "summary_rows",
    "sweep",
    "tail_bound_reference",
    "tail_count",

    # Moments
    "H_asymptotic",
    "H_moment",
    "H_moment_bruteforce",
    "H_power_series",
    "TruncationCtx",
    "charfun_product",
    "charfun_truncated",
    "eta_tau",
    "h_lambda",
    "h_leading",
    "lemma_inequalities",
    "prop2_bound_report",
    "prop3_grid",
    "u_v",

    # Experiments
    "compare_charfun",
    "gaussian_report",
    "moment_convergence",
    "run_hcheck",
]
