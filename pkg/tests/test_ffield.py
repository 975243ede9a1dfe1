"""
Tests for polynomial arithmetic over F_q, enumeration and residue rings.
"""

import numpy as np
import pytest

from hyperelliptic_class_numbers.engine.ffield import (
    FieldCtx,
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
    squarefree_flags,
)
from hyperelliptic_class_numbers.exceptions import BudgetExceededError
from hyperelliptic_class_numbers.models.base import PolyFilter


class TestFieldCtx:
    """Tests for field construction and the text format."""

    @pytest.mark.parametrize("q", [1, 2, 4, 9, 15])
    def test_rejects_non_odd_primes(self, q):
        """Only odd primes define a field here."""
        with pytest.raises(ValueError):
            FieldCtx(q)

    def test_parse_ascending(self, f3):
        """Coefficients are listed from the constant term up."""
        f = f3.parse("1,2,0,1")
        assert f.coeffs == (1, 2, 0, 1)
        assert f.degree == 3
        assert f.is_monic
        assert f.text() == "1,2,0,1"

    def test_parse_zero(self, f3):
        """'0' is the zero polynomial, of degree -1."""
        zero = f3.parse("0")
        assert zero.is_zero
        assert zero.degree == -1
        assert zero.norm == 0

    @pytest.mark.parametrize("text", ["1,2,0", "1,3", "", "1,,2", "a,b"])
    def test_parse_rejects_malformed(self, f3, text):
        """Trailing zeros, unreduced residues and junk are rejected."""
        with pytest.raises(ValueError):
            f3.parse(text)

    def test_poly_reduces_mod_q(self, f3):
        """FieldCtx.poly reduces arbitrary integers."""
        assert f3.poly([4, -1, 3]).coeffs == (1, 2)


class TestArithmetic:
    """Tests for ring operations in F_q[X]."""

    def test_multiply_and_divide(self, f3):
        """(X + 1)(X + 2) = X^2 + 2 over F_3, and division recovers the factor."""
        a, b = f3.parse("1,1"), f3.parse("2,1")
        product = a * b
        assert product.coeffs == (2, 0, 1)
        quot, rem = divmod(product, a)
        assert quot == b
        assert rem.is_zero

    def test_gcd_is_monic(self, f3):
        """gcd(X^2 - 1, 2X - 2) = X - 1."""
        result = poly_arith(f3.parse("2,0,1"), f3.parse("1,2"), "gcd")
        assert result.coeffs == (2, 1)

    def test_derivative_ignores_second_operand(self, f3):
        """derivative(X^3 + 2X + 1) = 2 over F_3."""
        assert poly_arith(f3.parse("1,2,0,1"), None, "derivative").coeffs == (2,)

    def test_binary_operation_needs_operand(self, f3):
        """Binary operations without b are errors."""
        with pytest.raises(ValueError):
            poly_arith(f3.parse("1,1"), None, "mul")

    def test_division_by_zero(self, f3):
        with pytest.raises(ZeroDivisionError):
            divmod(f3.parse("1,1"), f3.zero())

    def test_fields_do_not_mix(self, f3, f5):
        with pytest.raises(ValueError):
            f3.parse("1,1") + f5.parse("1,1")

    def test_evaluation(self, f3):
        """F(x) is evaluated mod q."""
        f = f3.parse("1,2,0,1")
        assert [f(x) for x in range(3)] == [1, 1, 1]


class TestSquarefreeAndIrreducible:
    """Tests for squarefree and irreducibility tests."""

    def test_square_is_not_squarefree(self, f3):
        assert not is_squarefree(f3.parse("0,0,1"))

    def test_qth_power_is_not_squarefree(self, f3):
        """X^3 + 1 = (X + 1)^3 has zero derivative over F_3."""
        assert not is_squarefree(f3.parse("1,0,0,1"))

    def test_distinct_roots_are_squarefree(self, f3):
        """X^3 - X splits into distinct linear factors."""
        assert is_squarefree(f3.parse("0,2,0,1"))

    def test_irreducibility(self, f3):
        """X^2 + 1 is irreducible over F_3; X^2 - 1 is not."""
        assert is_irreducible(f3.parse("1,0,1"))
        assert not is_irreducible(f3.parse("2,0,1"))

    def test_irreducible_needs_monic(self, f3):
        with pytest.raises(ValueError):
            is_irreducible(f3.parse("1,2"))


class TestEnumeration:
    """Tests for the monic numbering and prime counts."""

    def test_index_bijection(self, f3):
        """Index digits are the low coefficients, least significant first."""
        f = f3.parse("1,2,0,1")
        assert poly_index(f) == 7
        assert poly_from_index(3, 3, 7) == f
        assert poly_from_index(3, 3, 0).coeffs == (0, 0, 0, 1)

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            poly_from_index(3, 2, 9)

    @pytest.mark.parametrize("q,n,expected", [(3, 1, 3), (3, 2, 3), (3, 3, 8), (3, 4, 18),
                                              (5, 2, 10), (7, 3, 112)])
    def test_prime_counts(self, q, n, expected):
        assert prime_count_exact(q, n) == expected

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_degree_weighted_identity(self, n):
        """sum_{m | n} m pi_q(m) = q^n."""
        assert degree_weighted_prime_identity(3, n)
        assert degree_weighted_prime_identity(5, n)

    def test_sieve_matches_rabin(self):
        """The irreducible sieve agrees with the scalar test."""
        for n in (2, 3, 4):
            primes = monic_irreducibles(3, n)
            assert len(primes) == prime_count_exact(3, n)
            assert all(is_irreducible(p) for p in primes)

    def test_squarefree_counts(self):
        """q^d - q^{d-1} monic squarefree polynomials of degree d."""
        for d in (2, 3, 4, 5):
            assert int(squarefree_flags(3, d).sum()) == 3**d - 3 ** (d - 1)
        assert len(list(enumerate_monic(3, 3, PolyFilter.SQUAREFREE))) == 18

    def test_enumeration_order(self):
        """enumerate_monic follows the index order."""
        polys = list(enumerate_monic(3, 2, start=2, stop=5))
        assert [poly_index(f) for f in polys] == [2, 3, 4]

    def test_factor_squarefree(self, f3):
        """X^2 + 2 = (X + 1)(X + 2)."""
        factors = factor_squarefree(f3.parse("2,0,1"))
        assert [f.coeffs for f in factors] == [(1, 1), (2, 1)]

    def test_factor_rejects_squares(self, f3):
        with pytest.raises(ValueError):
            factor_squarefree(f3.parse("0,0,1"))


class TestResidueRing:
    """Tests for F_q[X]/(P) and its squares table."""

    @pytest.fixture
    def f9(self, f3):
        """F_9 as F_3[X]/(X^2 + 1)."""
        return ResidueRing(f3.parse("1,0,1"), build_table=True)

    def test_half_the_units_are_squares(self, f9):
        assert f9.size == 9
        assert int(f9.square_flags.sum()) == 4

    @pytest.mark.parametrize("q", [3, 5])
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_half_the_units_are_squares_for_every_prime(self, q, m):
        for p in monic_irreducibles(q, m):
            ring = ResidueRing(p, build_table=True)
            assert int(ring.square_flags.sum()) == (q**m - 1) // 2
            assert int((ring.symbol_table == 1).sum()) == (q**m - 1) // 2
            assert int((ring.symbol_table == -1).sum()) == (q**m - 1) // 2

    def test_table_agrees_with_euler_criterion(self, f3, f9):
        """Table lookups match r^{(|P|-1)/2} for every residue."""
        plain = ResidueRing(f3.parse("1,0,1"))
        for index in range(f9.size):
            residue = f9.element(index)
            assert f9.quadratic_character(residue) == plain.quadratic_character(residue)

    def test_reduce_rows_matches_scalar(self, f3, f9):
        rows = np.array([[1, 2, 0, 1], [2, 2, 2, 1], [0, 0, 1, 1]])
        reduced = f9.reduce_rows(rows)
        for row, residue in zip(rows, reduced):
            f = f3.poly(row.tolist())
            assert f9.element(int(residue @ f9.weights)) == f % f9.modulus

    def test_budget(self, f3):
        with pytest.raises(BudgetExceededError):
            ResidueRing(f3.parse("1,0,1"), build_table=True, budget=4)

    def test_character_sums(self, f3):
        """sum_x chi(F(x)) over F_3 matches direct evaluation."""
        ring = ResidueRing(f3.parse("0,1"), build_table=True)
        f = f3.parse("1,2,0,1")
        # F(x) = 1 for every x in F_3
        assert ring.character_sums(np.array([f.coeffs]))[0] == 3
