"""
L-polynomials P_C(u) of y^2 = F(x), class numbers and the statistic N_F.

Three independent paths produce the same integer coefficients:

- newton: power sums from the explicit formula
  -s_n = sum_{deg P^k = n} deg P (F/P)^k + [d even], then Newton identities;
- charsum: the Euler product expanded as sum_f chi_F(f) u^{deg f} over monic
  f of degree < d, divided by (1 - u) when the infinite place splits;
- pointcount: affine points over F_{q^n} counted in a residue ring.
"""

import logging
from functools import lru_cache
from typing import Optional, Sequence

import mpmath
import numpy as np
import sympy
from pydantic import ValidationError

from ..config import config
from ..exceptions import BudgetExceededError, InvariantViolation
from ..models.base import DegreeParity, LPolyMethod
from ..models.curves import CurveRecord, LPolynomial
from .ffield import (
    FqPoly,
    ResidueRing,
    is_squarefree,
    least_irreducible,
    monic_block,
    monic_irreducibles,
    multiply_block,
)
from .quadchar import (
    SymbolTableCache,
    infinite_place_value,
    lambda_char_sum,
    shared_symbol_cache,
)

logger = logging.getLogger(__name__)

# Tolerance of the numeric root-modulus check
RH_TOLERANCE = 1e-6


def genus(d: int) -> int:
    return (d - 1) // 2


def _check_curve(f: FqPoly) -> None:
    if not f.is_monic:
        raise ValueError(f"F must be monic, got {f}")
    if f.degree < 3:
        raise ValueError(f"deg F must be >= 3, got {f.degree}")
    if not is_squarefree(f):
        raise ValueError(f"F = {f} is not squarefree")


def newton_coefficients(power_sums: Sequence[int], g: int) -> list[int]:
    """a_0..a_g from s_1..s_g via n a_n = -sum_{k=1}^{n} s_k a_{n-k}; divisions must be exact."""
    a = [1]
    for n in range(1, g + 1):
        num = -sum(power_sums[k - 1] * a[n - k] for k in range(1, n + 1))
        if num % n:
            raise InvariantViolation(f"Newton division {num}/{n} is not exact")
        a.append(num // n)
    return a


def complete_functional_equation(head: Sequence[int], q: int, g: int) -> tuple[int, ...]:
    """Fill a_{g+1}..a_{2g} from a_{2g-n} = q^{g-n} a_n."""
    if len(head) != g + 1:
        raise ValueError(f"need a_0..a_{g}, got {len(head)} values")
    tail = [q ** (g - n) * head[n] for n in range(g - 1, -1, -1)]
    return tuple(head) + tuple(tail)


def power_sums_from_coefficients(coeffs: Sequence[int], count: int) -> list[int]:
    """Inverse Newton recursion: s_n = -n a_n - sum_{k=1}^{n-1} s_k a_{n-k}."""
    def a(i: int) -> int:
        return coeffs[i] if i < len(coeffs) else 0

    sums: list[int] = []
    for n in range(1, count + 1):
        sums.append(-n * a(n) - sum(sums[k - 1] * a(n - k) for k in range(1, n)))
    return sums


def _lpolynomial(f: FqPoly, coeffs: Sequence[int], power_sums: Sequence[int]) -> LPolynomial:
    g = genus(f.degree)
    try:
        return LPolynomial(
            q=f.q,
            g=g,
            d_parity=DegreeParity.of(f.degree),
            coeffs=tuple(coeffs),
            power_sums=tuple(power_sums[:g]),
        )
    except ValidationError as exc:
        raise InvariantViolation(f"L-polynomial of {f} is malformed: {exc}") from exc


# --- newton path ---------------------------------------------------------

def explicit_power_sums(f: FqPoly, count: int,
                        cache: Optional[SymbolTableCache] = None) -> list[int]:
    """s_n = -(Lambda-sum + [d even]) for n = 1..count."""
    delta = infinite_place_value(f)
    return [-(lambda_char_sum(f, n, cache) + delta) for n in range(1, count + 1)]


def _newton(f: FqPoly, cache: Optional[SymbolTableCache]) -> LPolynomial:
    g = genus(f.degree)
    sums = explicit_power_sums(f, g, cache)
    coeffs = complete_functional_equation(newton_coefficients(sums, g), f.q, g)
    return _lpolynomial(f, coeffs, sums)


def newton_batch(
    polys: np.ndarray, q: int, cache: SymbolTableCache
) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """
    Newton path for a block of monic squarefree coefficient rows of one degree.

    Returns the power sums (B, g) and the full coefficient tuples.
    """
    d = polys.shape[1] - 1
    g = genus(d)
    delta = 1 if d % 2 == 0 else 0
    sums = -(cache.lambda_sums(polys, g) + delta)
    coeffs = []
    for row in sums.tolist():
        coeffs.append(complete_functional_equation(newton_coefficients(row, g), q, g))
    return sums, coeffs


# --- charsum path --------------------------------------------------------

class MonicFactorMap:
    """
    For every monic f of degree 1..max_degree, one prime factor P and the index
    of f / P, laid out flat by degree (offset[n] + monic index).

    Lets chi_F(f) for all f be filled degree by degree from the prime symbols.
    """

    def __init__(self, q: int, max_degree: int):
        self.q = q
        self.max_degree = max_degree
        self.primes: list[FqPoly] = []
        for m in range(1, max_degree + 1):
            self.primes.extend(monic_irreducibles(q, m))
        self.offsets = [0]
        for n in range(max_degree + 1):
            self.offsets.append(self.offsets[-1] + q**n)
        self.prime_of: list[np.ndarray] = [np.zeros(1, dtype=np.int64)]
        self.cofactor_of: list[np.ndarray] = [np.zeros(1, dtype=np.int64)]

        first_prime = {}
        position = 0
        for m in range(1, max_degree + 1):
            first_prime[m] = position
            position += len(monic_irreducibles(q, m))

        for n in range(1, max_degree + 1):
            weights = q ** np.arange(n, dtype=np.int64)
            pid = np.full(q**n, -1, dtype=np.int64)
            cof = np.zeros(q**n, dtype=np.int64)
            for k in range(1, n + 1):
                cofactors = monic_block(q, n - k, 0, q ** (n - k))
                flat_cofactors = self.offsets[n - k] + np.arange(q ** (n - k), dtype=np.int64)
                for j, p in enumerate(monic_irreducibles(q, k)):
                    idx = multiply_block(p, cofactors)[:, :n] @ weights
                    fresh = pid[idx] < 0
                    pid[idx[fresh]] = first_prime[k] + j
                    cof[idx[fresh]] = flat_cofactors[fresh]
            if (pid < 0).any():
                raise InvariantViolation(f"unfactored monic of degree {n} over F_{q}")
            self.prime_of.append(pid)
            self.cofactor_of.append(cof)

    def character_sums(self, prime_symbols: np.ndarray) -> list[int]:
        """c_n = sum_{deg f = n} chi(f) for n = 0..max_degree, chi multiplicative."""
        chi = np.zeros(self.offsets[-1], dtype=np.int64)
        chi[0] = 1
        sums = [1]
        for n in range(1, self.max_degree + 1):
            lo, hi = self.offsets[n], self.offsets[n + 1]
            chi[lo:hi] = prime_symbols[self.prime_of[n]] * chi[self.cofactor_of[n]]
            sums.append(int(chi[lo:hi].sum()))
        return sums


@lru_cache(maxsize=8)
def _factor_map(q: int, max_degree: int) -> MonicFactorMap:
    return MonicFactorMap(q, max_degree)


def charsum_feasible(q: int, d: int) -> bool:
    """Whether running the charsum path over the whole family fits the budget."""
    family = q**d - q ** (d - 1)
    steps = sum(q**n for n in range(d))
    return family * steps <= config.charsum_budget


def _charsum(f: FqPoly, cache: Optional[SymbolTableCache]) -> LPolynomial:
    q, d = f.q, f.degree
    fmap = _factor_map(q, d - 1)
    if cache is None or cache.max_degree < d - 1:
        cache = shared_symbol_cache(q, d - 1)
    row = np.array([f.coeffs], dtype=np.int64)
    symbols = cache.batch_symbols(row)
    prime_symbols = np.concatenate([symbols[m][0] for m in range(1, d)]).astype(np.int64)
    c = fmap.character_sums(prime_symbols)
    if d % 2:
        coeffs = c
    else:
        # divide by (1 - u): quotient is the running sum, remainder is sum(c)
        if sum(c) != 0:
            raise InvariantViolation(f"(1 - u) does not divide the L-series of {f}")
        coeffs = list(np.cumsum(c[:-1]).tolist())
    g = genus(d)
    return _lpolynomial(f, coeffs, power_sums_from_coefficients(coeffs, g))


# --- pointcount path -----------------------------------------------------

@lru_cache(maxsize=32)
def extension_ring(q: int, n: int) -> ResidueRing:
    """F_{q^n} modulo the least monic irreducible of degree n, with a squares table."""
    return ResidueRing(least_irreducible(q, n), build_table=True)


def affine_point_counts(polys: np.ndarray, q: int, n: int) -> np.ndarray:
    """#{(x, y) in F_{q^n}^2 : y^2 = F(x)} for each coefficient row."""
    ring = extension_ring(q, n)
    return ring.size + ring.character_sums(polys)


def pointcount_power_sums(polys: np.ndarray, q: int, count: int) -> np.ndarray:
    """s_n = q^n + 1 - #C(F_{q^n}) for n = 1..count, smooth model at infinity included."""
    polys = np.asarray(polys, dtype=np.int64)
    d = polys.shape[1] - 1
    at_infinity = 2 if d % 2 == 0 else 1
    sums = np.empty((polys.shape[0], count), dtype=np.int64)
    for n in range(1, count + 1):
        total = affine_point_counts(polys, q, n) + at_infinity
        sums[:, n - 1] = q**n + 1 - total
    return sums


def _pointcount(f: FqPoly) -> LPolynomial:
    g = genus(f.degree)
    sums = pointcount_power_sums(np.array([f.coeffs], dtype=np.int64), f.q, g)[0].tolist()
    coeffs = complete_functional_equation(newton_coefficients(sums, g), f.q, g)
    return _lpolynomial(f, coeffs, sums)


def l_polynomial(
    f: FqPoly,
    method: LPolyMethod = LPolyMethod.NEWTON,
    cache: Optional[SymbolTableCache] = None,
) -> LPolynomial:
    """P_C(u) for y^2 = F(x), F monic squarefree of degree >= 3."""
    _check_curve(f)
    method = LPolyMethod(method)
    if method == LPolyMethod.NEWTON:
        return _newton(f, cache)
    if method == LPolyMethod.CHARSUM:
        return _charsum(f, cache)
    try:
        return _pointcount(f)
    except BudgetExceededError:
        logger.warning("pointcount for %s exceeds the table budget", f)
        raise


# --- derived quantities --------------------------------------------------

def class_number(lpoly: LPolynomial) -> int:
    """#J_C = P_C(1)."""
    return lpoly.class_number


def nf_from_class_number(h: int, g: int, q: int, degree_even: bool) -> float:
    """log h - g log q + [d even] log(1 - 1/q), from the exact integer h."""
    with mpmath.workdps(30):
        value = mpmath.log(h) - g * mpmath.log(q)
        if degree_even:
            value += mpmath.log(1 - mpmath.mpf(1) / q)
        return float(value)


def nf_statistic(lpoly: LPolynomial) -> float:
    return nf_from_class_number(lpoly.class_number, lpoly.g, lpoly.q, lpoly.degree_even)


def explicit_formula_check(f: FqPoly, lpoly: LPolynomial, n: int,
                           cache: Optional[SymbolTableCache] = None) -> bool:
    """-s_n recovered from the coefficients equals the Lambda-sum plus [d even]."""
    if not (1 <= n <= lpoly.g):
        raise ValueError(f"n must be in [1, {lpoly.g}], got {n}")
    s_n = power_sums_from_coefficients(lpoly.coeffs, n)[n - 1]
    return -s_n == lambda_char_sum(f, n, cache) + infinite_place_value(f)


def functional_equation_check(f: FqPoly, lpoly: LPolynomial,
                              cache: Optional[SymbolTableCache] = None) -> bool:
    """One extra Lambda-sum at n = g + 1 against the completed polynomial."""
    n = lpoly.g + 1
    implied = power_sums_from_coefficients(lpoly.coeffs, n)[n - 1]
    return -implied == lambda_char_sum(f, n, cache) + infinite_place_value(f)


def power_sum_bound_ok(lpoly: LPolynomial) -> bool:
    """|s_n| <= 2g q^{n/2}, checked exactly as s_n^2 <= 4 g^2 q^n."""
    return all(s * s <= 4 * lpoly.g**2 * lpoly.q**n
               for n, s in enumerate(lpoly.power_sums, start=1))


def _root_deviation(coeffs_high_first: Sequence[float], q: int) -> float:
    if len(coeffs_high_first) < 2:
        return 0.0
    roots = np.roots(np.asarray(coeffs_high_first, dtype=float))
    return float(np.max(np.abs(np.abs(roots) - q**-0.5)))


def coefficient_root_deviation(coeffs: Sequence[int], q: int) -> float:
    """
    max | |u| - q^{-1/2} | over the roots of sum a_n u^n.

    Repeated roots lose accuracy in np.roots, so when the direct estimate is
    above tolerance the roots of each squarefree factor are taken instead.
    """
    high_first = list(reversed(coeffs))
    deviation = _root_deviation(high_first, q)
    if deviation <= RH_TOLERANCE:
        return deviation
    u = sympy.Symbol("u")
    _, factors = sympy.Poly(high_first, u).sqf_list()
    return max(_root_deviation([float(c) for c in factor.all_coeffs()], q)
               for factor, _ in factors)


def rh_deviation(lpoly: LPolynomial) -> float:
    return coefficient_root_deviation(lpoly.coeffs, lpoly.q)


def satisfies_rh(lpoly: LPolynomial, tolerance: float = RH_TOLERANCE) -> bool:
    return rh_deviation(lpoly) <= tolerance


def curve_record(f: FqPoly, lpoly: LPolynomial) -> CurveRecord:
    return CurveRecord(
        q=f.q,
        d=f.degree,
        g=lpoly.g,
        f_coeffs=f.coeffs,
        class_number=lpoly.class_number,
        n_f=nf_statistic(lpoly),
        power_sums=lpoly.power_sums,
    )
