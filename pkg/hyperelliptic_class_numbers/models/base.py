"""
Base enums for hyperelliptic curve computations.

These label the computational paths, family filters and output formats
shared by the engine, the CLI and the web API.
"""

from enum import Enum

__all__ = [
    "DegreeParity",
    "LPolyMethod",
    "OutputFormat",
    "PolyFilter",
    "SweepMode",
]


class LPolyMethod(str, Enum):
    """Independent ways of computing the L-polynomial of y^2 = F(x)."""
    NEWTON = "newton"  # explicit formula: Lambda-weighted symbol sums + Newton identities
    CHARSUM = "charsum"  # full character sums over monic f of degree < d
    POINTCOUNT = "pointcount"  # affine points over F_{q^n} through residue rings


class PolyFilter(str, Enum):
    """Subsets of monic polynomials produced by enumeration."""
    ALL = "all"
    SQUAREFREE = "squarefree"
    IRREDUCIBLE = "irreducible"


class DegreeParity(str, Enum):
    """
    Parity of deg F.

    Odd degree ramifies the infinite place; monic even degree splits it,
    which adds the delta term to the explicit formula.
    """
    ODD = "odd"
    EVEN = "even"

    @classmethod
    def of(cls, degree: int) -> "DegreeParity":
        return cls.EVEN if degree % 2 == 0 else cls.ODD


class SweepMode(str, Enum):
    """How a family sweep visits curves."""
    EXHAUSTIVE = "exhaustive"
    SAMPLE = "sample"


class OutputFormat(str, Enum):
    """CLI output formats."""
    CSV = "csv"
    JSON = "json"
