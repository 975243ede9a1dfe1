"""
Curve-level value objects: L-polynomials, per-curve records and bound verdicts.
"""

import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .base import DegreeParity

__all__ = [
    "BoundInputs",
    "CurveRecord",
    "CurveVerdict",
    "LPolynomial",
]


class LPolynomial(BaseModel):
    """
    Numerator P_C(u) = prod (1 - alpha_i u) of the zeta function of y^2 = F(x).

    Coefficients are exact integers a_0..a_{2g}; power_sums caches
    s_n = sum alpha_i^n for n = 1..g.
    """
    model_config = ConfigDict(frozen=True)

    q: int = Field(..., ge=3, description="Field size (odd prime)")
    g: int = Field(..., ge=1, description="Genus")
    d_parity: DegreeParity
    coeffs: tuple[int, ...] = Field(..., description="a_0..a_{2g}, ascending")
    power_sums: tuple[int, ...] = Field(..., description="s_1..s_g")

    @model_validator(mode="after")
    def check_structure(self) -> "LPolynomial":
        if len(self.coeffs) != 2 * self.g + 1:
            raise ValueError(
                f"expected {2 * self.g + 1} coefficients for genus {self.g}, "
                f"got {len(self.coeffs)}"
            )
        if self.coeffs[0] != 1:
            raise ValueError(f"a_0 must be 1, got {self.coeffs[0]}")
        if len(self.power_sums) != self.g:
            raise ValueError(f"expected {self.g} power sums, got {len(self.power_sums)}")
        for n in range(self.g + 1):
            if self.coeffs[2 * self.g - n] != self.q ** (self.g - n) * self.coeffs[n]:
                raise ValueError(f"functional equation fails at a_{2 * self.g - n}")
        if sum(self.coeffs) < 1:
            raise ValueError(f"P_C(1) = {sum(self.coeffs)} is not a group order")
        return self

    @property
    def degree_even(self) -> bool:
        return self.d_parity == DegreeParity.EVEN

    @property
    def class_number(self) -> int:
        """#J_C = P_C(1)."""
        return sum(self.coeffs)

    def evaluate(self, u: complex) -> complex:
        acc: complex = 0
        for a in reversed(self.coeffs):
            acc = acc * u + a
        return acc


class CurveRecord(BaseModel):
    """One swept curve: F, its class number, power sums and the statistic N_F."""
    model_config = ConfigDict(frozen=True)

    q: int = Field(..., ge=3)
    d: int = Field(..., ge=3)
    g: int = Field(..., ge=1)
    f_coeffs: tuple[int, ...] = Field(..., description="F ascending, leading 1 included")
    class_number: int = Field(..., ge=1)
    n_f: float
    power_sums: tuple[int, ...]

    @model_validator(mode="after")
    def check_shape(self) -> "CurveRecord":
        if self.g != (self.d - 1) // 2:
            raise ValueError(f"genus {self.g} does not match degree {self.d}")
        if len(self.f_coeffs) != self.d + 1 or self.f_coeffs[-1] != 1:
            raise ValueError(f"F must be monic of degree {self.d}, got {self.f_coeffs}")
        if len(self.power_sums) != self.g:
            raise ValueError(f"expected {self.g} power sums, got {len(self.power_sums)}")
        return self

    @property
    def poly_text(self) -> str:
        return ",".join(str(c) for c in self.f_coeffs)

    @property
    def log_class_number(self) -> float:
        # math.log takes arbitrary-size ints without a float conversion
        return math.log(self.class_number)

    @staticmethod
    def csv_header(g: int) -> list[str]:
        return ["q", "d", "g", "F", "class_number", "n_f"] + [f"s_{n}" for n in range(1, g + 1)]

    def csv_row(self) -> list[str]:
        return [
            str(self.q),
            str(self.d),
            str(self.g),
            self.poly_text,
            str(self.class_number),
            format(self.n_f, ".17g"),
        ] + [str(s) for s in self.power_sums]


class BoundInputs(BaseModel):
    """Inputs of the class number bound: genus, field size and Galois group order."""
    model_config = ConfigDict(frozen=True)

    g: int = Field(..., ge=1, description="Genus")
    q: int = Field(..., ge=2, description="Field size")
    N: int = Field(default=2, ge=2, description="Order of the Galois group of the cover")


class CurveVerdict(BaseModel):
    """Structured result of checking one record against the Weil and class number bounds."""
    q: int
    g: int
    class_number: int
    weil_lo: float
    weil_hi: float
    in_weil_interval: bool
    log_deviation: float = Field(..., description="|log h - g log q|")
    thm1_bound: float
    within_thm1_bound: bool
    violations: list[str] = Field(default_factory=list)
    poly_text: Optional[str] = None

    @property
    def passed(self) -> bool:
        return not self.violations
