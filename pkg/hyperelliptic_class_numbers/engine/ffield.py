"""
Exact arithmetic in F_q and F_q[X] for odd primes q.

Polynomials are immutable coefficient tuples (ascending degree). Monic
polynomials of degree n are numbered by the integer whose base-q digits are
c_0, c_1, ..., c_{n-1} (c_0 least significant); this order is the public
enumeration order used for sharding and reproducibility.

Bulk work (sieves, residue tables, point counts) goes through numpy arrays of
coefficient digits; the scalar FqPoly API is used for single curves and as an
oracle for the vectorised paths.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Literal, Optional, Sequence

import numpy as np
import sympy

from ..config import config
from ..exceptions import BudgetExceededError, InvariantViolation
from ..models.base import PolyFilter

logger = logging.getLogger(__name__)

# Degree reported for the zero polynomial (stands in for minus infinity)
ZERO_DEGREE = -1

# Indices processed per numpy block when building tables
_BLOCK = 2**16


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class FieldCtx:
    """The prime field F_q."""
    q: int

    def __post_init__(self):
        if self.q < 3 or self.q % 2 == 0 or not sympy.isprime(self.q):
            raise ValueError(f"q must be an odd prime, got {self.q}")

    def poly(self, coeffs: Sequence[int]) -> "FqPoly":
        """Build a polynomial from arbitrary integers, reducing mod q."""
        return FqPoly(self.q, _trim([c % self.q for c in coeffs]))

    def parse(self, text: str) -> "FqPoly":
        """
        Parse the comma-separated ascending coefficient format.

        "1,2,0,1" is X^3 + 2X + 1. Residues must lie in [0, q) and the last
        coefficient must be nonzero (only "0" denotes the zero polynomial).
        """
        parts = [p.strip() for p in text.split(",")]
        if not parts or any(not p for p in parts):
            raise ValueError(f"malformed polynomial text {text!r}")
        try:
            coeffs = [int(p) for p in parts]
        except ValueError as exc:
            raise ValueError(f"malformed polynomial text {text!r}") from exc
        for c in coeffs:
            if not (0 <= c < self.q):
                raise ValueError(f"residue {c} outside [0, {self.q})")
        if coeffs == [0]:
            return self.zero()
        if coeffs[-1] == 0:
            raise ValueError(f"leading coefficient of {text!r} is zero")
        return FqPoly(self.q, tuple(coeffs))

    def zero(self) -> "FqPoly":
        return FqPoly(self.q, ())

    def one(self) -> "FqPoly":
        return FqPoly(self.q, (1,))

    def x(self) -> "FqPoly":
        return FqPoly(self.q, (0, 1))


@dataclass(frozen=True)
class FqPoly:
    """
    Element of F_q[X] stored as ascending residues without trailing zeros.

    Use FieldCtx.poly to build from unreduced integers; the constructor
    itself only accepts normalised data.
    """
    q: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        for c in self.coeffs:
            if not (0 <= c < self.q):
                raise ValueError(f"residue {c} outside [0, {self.q})")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    @property
    def norm(self) -> int:
        """|f| = q^{deg f} (0 for the zero polynomial)."""
        return self.q ** self.degree if self.coeffs else 0

    def text(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    def _check(self, other: "FqPoly") -> None:
        if other.q != self.q:
            raise ValueError(f"polynomials over F_{self.q} and F_{other.q} do not mix")

    def __add__(self, other: "FqPoly") -> "FqPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return FqPoly(self.q, _trim([(x + y) % self.q for x, y in zip(a, b)]))

    def __neg__(self) -> "FqPoly":
        return FqPoly(self.q, tuple((-c) % self.q for c in self.coeffs))

    def __sub__(self, other: "FqPoly") -> "FqPoly":
        return self + (-other)

    def __mul__(self, other: "FqPoly") -> "FqPoly":
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return FqPoly(self.q, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return FqPoly(self.q, _trim([c % self.q for c in out]))

    def __divmod__(self, other: "FqPoly") -> tuple["FqPoly", "FqPoly"]:
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = self.q
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return FqPoly(q, ()), self
        inv = pow(other.leading, -1, q)
        quot = [0] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k] * inv % q
            if c:
                quot[k - db] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - db + j] = (rem[k - db + j] - c * b) % q
        return FqPoly(q, _trim(quot)), FqPoly(q, _trim(rem[:db]))

    def __floordiv__(self, other: "FqPoly") -> "FqPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "FqPoly") -> "FqPoly":
        return divmod(self, other)[1]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.q
        return acc

    def monic(self) -> "FqPoly":
        if self.is_zero:
            return self
        inv = pow(self.leading, -1, self.q)
        return FqPoly(self.q, tuple(c * inv % self.q for c in self.coeffs))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            coef = str(c) if (c != 1 or k == 0) else ""
            terms.append(f"{coef}{mono}")
        return " + ".join(terms)


def derivative(f: FqPoly) -> FqPoly:
    """Formal derivative."""
    return FqPoly(f.q, _trim([(k * c) % f.q for k, c in enumerate(f.coeffs)][1:]))


def poly_gcd(a: FqPoly, b: FqPoly) -> FqPoly:
    """Monic generator of (a, b); gcd(0, 0) = 0."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def powmod(base: FqPoly, exponent: int, modulus: FqPoly) -> FqPoly:
    if exponent < 0:
        raise ValueError(f"exponent must be non-negative, got {exponent}")
    result = FqPoly(base.q, (1,)) % modulus
    base = base % modulus
    while exponent:
        if exponent & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        exponent >>= 1
    return result


PolyOp = Literal["add", "sub", "mul", "divmod", "gcd", "derivative"]


def poly_arith(
    a: FqPoly, b: Optional[FqPoly], op: PolyOp
) -> FqPoly | tuple[FqPoly, FqPoly]:
    """Dispatch one ring operation by name; derivative ignores b."""
    if op == "derivative":
        return derivative(a)
    if b is None:
        raise ValueError(f"operation {op!r} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "divmod":
        return divmod(a, b)
    if op == "gcd":
        return poly_gcd(a, b)
    raise ValueError(f"unknown operation {op!r}")


def is_squarefree(f: FqPoly) -> bool:
    """
    True iff f has no repeated irreducible factor.

    When f' = 0 the polynomial lies in F_q[X^q], hence is a q-th power.
    """
    if f.degree < 1:
        raise ValueError(f"is_squarefree needs deg >= 1, got {f.degree}")
    df = derivative(f)
    if df.is_zero:
        return False
    return poly_gcd(f, df).degree == 0


def is_irreducible(p: FqPoly) -> bool:
    """
    Rabin's test: P | X^{q^n} - X and gcd(X^{q^{n/r}} - X, P) = 1 for primes r | n.
    """
    if not p.is_monic or p.degree < 1:
        raise ValueError("is_irreducible needs a monic polynomial of degree >= 1")
    n = p.degree
    if n == 1:
        return True
    x = FqPoly(p.q, (0, 1))
    frob = [x % p]
    for _ in range(n):
        frob.append(powmod(frob[-1], p.q, p))
    if frob[n] != x % p:
        return False
    for r in sympy.primefactors(n):
        if poly_gcd(frob[n // r] - x, p).degree != 0:
            return False
    return True


# --- enumeration ---------------------------------------------------------

def poly_from_index(q: int, n: int, index: int) -> FqPoly:
    """The monic polynomial of degree n numbered `index` in [0, q^n)."""
    if not (0 <= index < q**n):
        raise ValueError(f"index {index} outside [0, {q}^{n})")
    coeffs = []
    for _ in range(n):
        index, c = divmod(index, q)
        coeffs.append(c)
    coeffs.append(1)
    return FqPoly(q, tuple(coeffs))


def poly_index(f: FqPoly) -> int:
    """Inverse of poly_from_index for monic f."""
    if not f.is_monic:
        raise ValueError("only monic polynomials are numbered")
    index = 0
    for c in reversed(f.coeffs[:-1]):
        index = index * f.q + c
    return index


def digits(indices: np.ndarray, q: int, n: int) -> np.ndarray:
    """Base-q digits of each index, least significant first: shape (len, n)."""
    out = np.empty((len(indices), n), dtype=np.int64)
    rest = np.asarray(indices, dtype=np.int64).copy()
    for k in range(n):
        out[:, k] = rest % q
        rest //= q
    return out


def monic_block(q: int, n: int, start: int, stop: int) -> np.ndarray:
    """Coefficient rows (leading 1 included) for monic indices in [start, stop)."""
    idx = np.arange(start, stop, dtype=np.int64)
    block = np.ones((len(idx), n + 1), dtype=np.int64)
    block[:, :n] = digits(idx, q, n)
    return block


def multiply_block(f: FqPoly, block: np.ndarray) -> np.ndarray:
    """Coefficient rows of f * b for every row b of a coefficient block."""
    rows, width = block.shape
    out = np.zeros((rows, width + len(f.coeffs) - 1), dtype=np.int64)
    for i, c in enumerate(f.coeffs):
        if c:
            out[:, i:i + width] += c * block
    return out % f.q


def enumerate_monic(
    q: int,
    n: int,
    poly_filter: PolyFilter = PolyFilter.ALL,
    start: int = 0,
    stop: Optional[int] = None,
) -> Iterator[FqPoly]:
    """Monic polynomials of degree n with index in [start, stop), in index order."""
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    stop = q**n if stop is None else stop
    if not (0 <= start <= stop <= q**n):
        raise ValueError(f"range [{start}, {stop}) outside [0, {q}^{n})")
    for index in range(start, stop):
        f = poly_from_index(q, n, index)
        if poly_filter == PolyFilter.SQUAREFREE and not is_squarefree(f):
            continue
        if poly_filter == PolyFilter.IRREDUCIBLE and not is_irreducible(f):
            continue
        yield f


def prime_count_exact(q: int, n: int) -> int:
    """Number of monic irreducibles of degree n: (1/n) sum_{m|n} mu(m) q^{n/m}."""
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    total = sum(int(sympy.mobius(m)) * q ** (n // m) for m in sympy.divisors(n))
    return total // n


def degree_weighted_prime_identity(q: int, n: int) -> bool:
    """sum_{m|n} m pi_q(m) = q^n, i.e. the Lambda-weighted count of degree-n monics."""
    return sum(m * prime_count_exact(q, m) for m in sympy.divisors(n)) == q**n


def _check_table_size(size: int, what: str) -> None:
    if size > config.exhaustive_budget:
        raise BudgetExceededError(
            f"{what} needs {size} entries, above the exhaustive budget {config.exhaustive_budget}"
        )


@lru_cache(maxsize=64)
def irreducible_flags(q: int, n: int) -> np.ndarray:
    """Boolean array over monic indices of degree n marking irreducibles (sieve)."""
    size = q**n
    _check_table_size(size, f"irreducible sieve for q={q}, n={n}")
    flags = np.ones(size, dtype=bool)
    weights = q ** np.arange(n, dtype=np.int64)
    for k in range(1, n // 2 + 1):
        cofactors = monic_block(q, n - k, 0, q ** (n - k))
        for p in monic_irreducibles(q, k):
            products = multiply_block(p, cofactors)
            flags[products[:, :n] @ weights] = False
    flags.setflags(write=False)
    return flags


@lru_cache(maxsize=64)
def monic_irreducibles(q: int, n: int) -> tuple[FqPoly, ...]:
    """All monic irreducibles of degree n in enumeration order."""
    if n == 1:
        return tuple(poly_from_index(q, 1, i) for i in range(q))
    indices = np.flatnonzero(irreducible_flags(q, n))
    primes = tuple(poly_from_index(q, n, int(i)) for i in indices)
    if len(primes) != prime_count_exact(q, n):
        raise InvariantViolation(f"sieve found {len(primes)} primes of degree {n} over F_{q}")
    return primes


@lru_cache(maxsize=64)
def least_irreducible(q: int, n: int) -> FqPoly:
    """Lexicographically least monic irreducible of degree n."""
    for f in enumerate_monic(q, n):
        if is_irreducible(f):
            return f
    raise InvariantViolation(f"no irreducible of degree {n} over F_{q}")


@lru_cache(maxsize=16)
def squarefree_flags(q: int, n: int) -> np.ndarray:
    """Boolean array over monic indices of degree n marking squarefree polynomials."""
    size = q**n
    _check_table_size(size, f"squarefree sieve for q={q}, n={n}")
    flags = np.ones(size, dtype=bool)
    weights = q ** np.arange(n, dtype=np.int64)
    for k in range(1, n // 2 + 1):
        cofactors = monic_block(q, n - 2 * k, 0, q ** (n - 2 * k))
        for p in monic_irreducibles(q, k):
            products = multiply_block(p * p, cofactors)
            flags[products[:, :n] @ weights] = False
    flags.setflags(write=False)
    return flags


def factor_squarefree(h: FqPoly) -> list[FqPoly]:
    """Prime factors of a monic squarefree h by trial division; raises if h has a square factor."""
    if not h.is_monic:
        raise ValueError("h must be monic")
    factors: list[FqPoly] = []
    rest = h
    for k in range(1, h.degree + 1):
        if rest.degree < k:
            break
        if 2 * k > rest.degree:
            # what remains is irreducible
            factors.append(rest)
            rest = FqPoly(h.q, (1,))
            break
        for p in monic_irreducibles(h.q, k):
            quot, rem = divmod(rest, p)
            if rem.is_zero:
                if (quot % p).is_zero:
                    raise ValueError(f"{h} is not squarefree")
                factors.append(p)
                rest = quot
    if rest.degree > 0:
        factors.append(rest)
    return factors


# --- residue rings -------------------------------------------------------

def reduction_matrix(modulus: FqPoly, max_degree: int) -> np.ndarray:
    """Rows X^i mod P for i = 0..max_degree, shape (max_degree + 1, deg P)."""
    n = modulus.degree
    q = modulus.q
    low = np.array(modulus.coeffs[:-1], dtype=np.int64)
    rows = np.zeros((max_degree + 1, n), dtype=np.int64)
    row = np.zeros(n, dtype=np.int64)
    row[0] = 1
    for i in range(max_degree + 1):
        rows[i] = row
        top = row[-1]
        row = np.roll(row, 1)
        row[0] = 0
        # X^n = -(c_0 + ... + c_{n-1} X^{n-1}) mod P
        row = (row - top * low) % q
    return rows


class ResidueRing:
    """
    F_q[X]/(P) for a monic P of degree n >= 1.

    Residues are FqPoly of degree < n, numbered by their digit index in
    [0, q^n). With build_table=True the ring keeps a boolean table of nonzero
    squares; without it, square tests use r^{(q^n - 1)/2}.
    """

    # Entries allowed in a cached power stack before evaluation falls back to blocks
    POWER_CACHE_LIMIT = 2**25

    def __init__(self, modulus: FqPoly, build_table: bool = False,
                 budget: Optional[int] = None):
        if not modulus.is_monic or modulus.degree < 1:
            raise ValueError("modulus must be monic of degree >= 1")
        self.modulus = modulus
        self.q = modulus.q
        self.n = modulus.degree
        self.size = self.q**self.n
        self.weights = self.q ** np.arange(self.n, dtype=np.int64)
        self._reductions: dict[int, np.ndarray] = {}
        self._powers: dict[int, np.ndarray] = {}
        self._symbols: Optional[np.ndarray] = None
        self.square_flags: Optional[np.ndarray] = None
        if build_table:
            limit = config.table_budget if budget is None else budget
            if self.size > limit:
                raise BudgetExceededError(
                    f"squares table for modulus of degree {self.n} over F_{self.q} "
                    f"needs {self.size} entries, budget is {limit}"
                )
            self.square_flags = self._build_square_flags()

    @property
    def has_table(self) -> bool:
        return self.square_flags is not None

    def reduction(self, max_degree: int) -> np.ndarray:
        if max_degree not in self._reductions:
            self._reductions[max_degree] = reduction_matrix(self.modulus, max_degree)
        return self._reductions[max_degree]

    # scalar interface

    def reduce(self, f: FqPoly) -> FqPoly:
        return f % self.modulus

    def mulmod(self, a: FqPoly, b: FqPoly) -> FqPoly:
        return (a * b) % self.modulus

    def powmod(self, a: FqPoly, exponent: int) -> FqPoly:
        return powmod(a, exponent, self.modulus)

    def index_of(self, residue: FqPoly) -> int:
        if residue.degree >= self.n:
            raise ValueError(f"{residue} is not reduced mod {self.modulus}")
        index = 0
        for c in reversed(residue.coeffs):
            index = index * self.q + c
        return index

    def element(self, index: int) -> FqPoly:
        coeffs = []
        for _ in range(self.n):
            index, c = divmod(index, self.q)
            coeffs.append(c)
        return FqPoly(self.q, _trim(coeffs))

    def quadratic_character(self, residue: FqPoly) -> int:
        """0, +1 or -1; assumes the modulus is irreducible."""
        residue = self.reduce(residue)
        if residue.is_zero:
            return 0
        if self.square_flags is not None:
            return 1 if self.square_flags[self.index_of(residue)] else -1
        value = self.powmod(residue, (self.size - 1) // 2)
        if value.coeffs == (1,):
            return 1
        if value.coeffs == (self.q - 1,):
            return -1
        raise InvariantViolation(
            f"{residue}^((|P|-1)/2) mod {self.modulus} is {value}, not +-1; "
            "the modulus is not irreducible"
        )

    def is_square(self, residue: FqPoly) -> bool:
        """True for nonzero squares."""
        return self.quadratic_character(residue) == 1

    # vectorised interface

    def elements(self, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
        stop = self.size if stop is None else stop
        return digits(np.arange(start, stop, dtype=np.int64), self.q, self.n)

    def indices(self, residues: np.ndarray) -> np.ndarray:
        return residues @ self.weights

    def reduce_rows(self, rows: np.ndarray) -> np.ndarray:
        """Reduce coefficient rows (any width) mod P."""
        rows = np.asarray(rows, dtype=np.int64) % self.q
        return (rows @ self.reduction(rows.shape[1] - 1)) % self.q

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of two residue arrays of shape (B, n)."""
        n = self.n
        conv = np.zeros((a.shape[0], 2 * n - 1), dtype=np.int64)
        for i in range(n):
            conv[:, i:i + n] += a[:, i:i + 1] * b
        return self.reduce_rows(conv)

    def _build_square_flags(self) -> np.ndarray:
        flags = np.zeros(self.size, dtype=bool)
        for start in range(0, self.size, _BLOCK):
            elems = self.elements(start, min(start + _BLOCK, self.size))
            flags[self.indices(self.mul_arrays(elems, elems))] = True
        flags[0] = False
        flags.setflags(write=False)
        return flags

    @property
    def symbol_table(self) -> np.ndarray:
        """int8 table of quadratic character values indexed by residue index."""
        if self.square_flags is None:
            raise ValueError("ring was built without a squares table")
        if self._symbols is None:
            table = np.where(self.square_flags, 1, -1).astype(np.int8)
            table[0] = 0
            table.setflags(write=False)
            self._symbols = table
        return self._symbols

    def _power_stack(self, max_k: int, start: int, stop: int) -> np.ndarray:
        """x^k for k = 0..max_k and every element x in [start, stop): (max_k+1, B, n)."""
        x = self.elements(start, stop)
        stack = np.empty((max_k + 1,) + x.shape, dtype=np.int64)
        stack[0] = 0
        stack[0][:, 0] = 1
        stack[0] = self.reduce_rows(stack[0])
        for k in range(1, max_k + 1):
            stack[k] = self.mul_arrays(stack[k - 1], x)
        return stack

    def _power_blocks(self, max_k: int) -> Iterator[np.ndarray]:
        if (max_k + 1) * self.size * self.n <= self.POWER_CACHE_LIMIT:
            if max_k not in self._powers:
                self._powers[max_k] = self._power_stack(max_k, 0, self.size)
            yield self._powers[max_k]
            return
        for start in range(0, self.size, _BLOCK):
            yield self._power_stack(max_k, start, min(start + _BLOCK, self.size))

    def character_sums(self, polys: np.ndarray) -> np.ndarray:
        """
        sum over x in the ring of chi(F(x)) for each coefficient row F.

        polys has shape (M, d+1) over F_q; needs the squares table.
        """
        table = self.symbol_table
        polys = np.asarray(polys, dtype=np.int64)
        max_k = polys.shape[1] - 1
        totals = np.zeros(polys.shape[0], dtype=np.int64)
        for stack in self._power_blocks(max_k):
            for lo in range(0, polys.shape[0], 16):
                chunk = polys[lo:lo + 16]
                values = np.einsum("mk,kbn->mbn", chunk, stack) % self.q
                totals[lo:lo + 16] += table[values @ self.weights].sum(axis=1, dtype=np.int64)
        return totals


def residue_ring(p: FqPoly, build_table: bool = False) -> ResidueRing:
    return ResidueRing(p, build_table=build_table)
