"""
Hyperelliptic Class Numbers

Exact L-polynomials and class numbers of hyperelliptic curves y^2 = F(x)
over odd prime fields, family statistics of the fluctuation
N_F = log #J_C - g log q + [d even] log(1 - 1/q), and the limiting moments
and characteristic function these statistics converge to.
"""

__version__ = "0.1.0"

from .models import (
    # Base types
    DegreeParity,
    LPolyMethod,
    OutputFormat,
    PolyFilter,
    SweepMode,

    # Curves
    BoundInputs,
    CurveRecord,
    CurveVerdict,
    LPolynomial,

    # Reports
    CharfunPoint,
    InequalityCheck,
    Lemma21Report,
    Lemma22Report,
    LemmaReport,
    MomentReport,
    Prop2Report,
    Prop3Row,
    RunManifest,
)

from .exceptions import (
    BudgetExceededError,
    InconclusiveError,
    InvariantViolation,
)

__all__ = [
    # Version
    "__version__",

    # Base types
    "DegreeParity",
    "LPolyMethod",
    "OutputFormat",
    "PolyFilter",
    "SweepMode",

    # Curves
    "BoundInputs",
    "CurveRecord",
    "CurveVerdict",
    "LPolynomial",

    # Reports
    "CharfunPoint",
    "InequalityCheck",
    "Lemma21Report",
    "Lemma22Report",
    "LemmaReport",
    "MomentReport",
    "Prop2Report",
    "Prop3Row",
    "RunManifest",

    # Errors
    "BudgetExceededError",
    "InconclusiveError",
    "InvariantViolation",
]
