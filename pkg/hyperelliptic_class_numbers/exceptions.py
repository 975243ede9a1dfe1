"""
Exception types shared by the engine, the CLI and the API.
"""


class BudgetExceededError(ValueError):
    """A table or enumeration would exceed the configured budget."""


class InvariantViolation(ArithmeticError):
    """An exact arithmetic contract failed (inexact division, bad symbol, ...).

    Raised instead of rounding; it always signals a bug or a wrong convention.
    """


class InconclusiveError(RuntimeError):
    """Certified intervals overlap, so an inequality can be neither proved nor refuted."""
