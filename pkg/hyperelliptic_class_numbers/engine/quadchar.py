"""
Quadratic residue symbols (F/P) in F_q[X] and Lambda-weighted character sums.

Symbols are computed by reducing F modulo P and looking the residue up in a
per-prime table; above the table budget the symbol falls back to
F^{(|P|-1)/2} mod P.
"""

import logging
from functools import lru_cache
from typing import Optional

import numpy as np
import sympy

from ..config import config
from ..exceptions import InvariantViolation
from .ffield import FqPoly, ResidueRing, is_irreducible, monic_irreducibles

logger = logging.getLogger(__name__)


class SymbolTableCache:
    """
    Symbol tables for every monic prime of degree <= max_degree over F_q.

    Tables are stacked per degree (shape: primes x residues) so a whole batch
    of curves is handled with one matrix product per degree. Degrees whose
    tables would overflow the budget are left to powmod.
    Immutable after construction; safe to share between workers.
    """

    def __init__(self, q: int, max_degree: int, budget: Optional[int] = None):
        if max_degree < 1:
            raise ValueError(f"max_degree must be >= 1, got {max_degree}")
        self.q = q
        self.max_degree = max_degree
        budget = config.table_budget if budget is None else budget

        self.primes: dict[int, tuple[FqPoly, ...]] = {}
        self.tables: dict[int, np.ndarray] = {}
        self._rings: dict[FqPoly, ResidueRing] = {}
        self._index: dict[FqPoly, tuple[int, int]] = {}
        self._stacked: dict[tuple[int, int], np.ndarray] = {}

        used = 0
        for m in range(1, max_degree + 1):
            primes = monic_irreducibles(q, m)
            self.primes[m] = primes
            for i, p in enumerate(primes):
                self._index[p] = (m, i)
            cost = len(primes) * q**m
            if used + cost > budget:
                logger.info("degree %d symbols over F_%d use powmod (table budget %d)",
                            m, q, budget)
                continue
            used += cost
            rings = [ResidueRing(p, build_table=True, budget=budget) for p in primes]
            for p, ring in zip(primes, rings):
                self._rings[p] = ring
            table = np.stack([ring.symbol_table for ring in rings])
            table.setflags(write=False)
            self.tables[m] = table
        self.table_entries = used

    def covers(self, p: FqPoly) -> bool:
        return p in self._rings

    def prime_count(self, m: int) -> int:
        return len(self.primes[m])

    def symbol(self, f: FqPoly, p: FqPoly) -> int:
        ring = self._rings.get(p)
        if ring is None:
            return ResidueRing(p).quadratic_character(f)
        residue = f % p
        return int(self.tables[p.degree][self._index[p][1], ring.index_of(residue)])

    def _stacked_reduction(self, m: int, width: int) -> np.ndarray:
        """Columns X^i mod P for all primes of degree m side by side: (width, k_m * m)."""
        key = (m, width)
        if key not in self._stacked:
            mats = [self._rings[p].reduction(width - 1) if p in self._rings
                    else ResidueRing(p).reduction(width - 1) for p in self.primes[m]]
            stacked = np.concatenate(mats, axis=1)
            stacked.setflags(write=False)
            self._stacked[key] = stacked
        return self._stacked[key]

    def batch_symbols(
        self, polys: np.ndarray, degrees: Optional[range] = None
    ) -> dict[int, np.ndarray]:
        """
        Symbols of each coefficient row against every prime: {m: (B, k_m) int8}.
        """
        polys = np.asarray(polys, dtype=np.int64)
        rows, width = polys.shape
        degrees = degrees if degrees is not None else range(1, self.max_degree + 1)
        out: dict[int, np.ndarray] = {}
        for m in degrees:
            k = len(self.primes[m])
            if m in self.tables:
                residues = (polys @ self._stacked_reduction(m, width)) % self.q
                idx = residues.reshape(rows, k, m) @ (self.q ** np.arange(m, dtype=np.int64))
                out[m] = self.tables[m][np.arange(k), idx]
            else:
                out[m] = self._symbols_by_powmod(polys, m)
        return out

    def _symbols_by_powmod(self, polys: np.ndarray, m: int) -> np.ndarray:
        chi = np.empty((polys.shape[0], len(self.primes[m])), dtype=np.int8)
        for b, row in enumerate(polys):
            f = FqPoly(self.q, _trimmed(row))
            for i, p in enumerate(self.primes[m]):
                chi[b, i] = ResidueRing(p).quadratic_character(f)
        return chi

    def lambda_sums(self, polys: np.ndarray, n_max: int) -> np.ndarray:
        """
        sum_{deg P^k = n} deg P * (F/P)^k for n = 1..n_max and each row: (B, n_max).
        """
        if n_max > self.max_degree:
            raise ValueError(f"cache covers degree <= {self.max_degree}, asked for {n_max}")
        chi = self.batch_symbols(polys, range(1, n_max + 1))
        odd = {m: c.sum(axis=1, dtype=np.int64) for m, c in chi.items()}
        even = {m: (c != 0).sum(axis=1, dtype=np.int64) for m, c in chi.items()}
        sums = np.zeros((polys.shape[0], n_max), dtype=np.int64)
        for n in range(1, n_max + 1):
            for m in sympy.divisors(n):
                part = odd[m] if (n // m) % 2 else even[m]
                sums[:, n - 1] += m * part
        return sums


@lru_cache(maxsize=16)
def shared_symbol_cache(q: int, max_degree: int) -> SymbolTableCache:
    """Per-process cache of symbol tables keyed by (q, max_degree)."""
    return SymbolTableCache(q, max_degree)


def _trimmed(row: np.ndarray) -> tuple[int, ...]:
    coeffs = [int(c) for c in row]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def legendre_symbol(f: FqPoly, p: FqPoly, cache: Optional[SymbolTableCache] = None) -> int:
    """(F/P) in {-1, 0, +1} for a monic irreducible P."""
    if config.debug_checks and not is_irreducible(p):
        raise InvariantViolation(f"{p} is not irreducible")
    if cache is not None and cache.covers(p):
        return cache.symbol(f, p)
    return ResidueRing(p).quadratic_character(f)


def char_prime_power(f: FqPoly, p: FqPoly, k: int,
                     cache: Optional[SymbolTableCache] = None) -> int:
    """(F/P^k) = (F/P)^k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return legendre_symbol(f, p, cache) ** k


def infinite_place_value(f: FqPoly) -> int:
    """(F/infinity) for monic F: 1 when deg F is even (split), 0 when odd (ramified)."""
    if not f.is_monic:
        raise ValueError("the infinite place convention needs monic F")
    return 1 if f.degree % 2 == 0 else 0


def lambda_char_sum(f: FqPoly, n: int, cache: Optional[SymbolTableCache] = None) -> int:
    """
    sum over prime powers P^k of degree n of deg P * (F/P)^k.

    Composite moduli are never visited since Lambda vanishes on them. The
    infinite place is not included.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if cache is not None and cache.max_degree >= n:
        row = np.array([f.coeffs], dtype=np.int64)
        return int(cache.lambda_sums(row, n)[0, n - 1])
    total = 0
    for m in sympy.divisors(n):
        k = n // m
        for p in monic_irreducibles(f.q, m):
            total += m * char_prime_power(f, p, k, cache)
    return total
