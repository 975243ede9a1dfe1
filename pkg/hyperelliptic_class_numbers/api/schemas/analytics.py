"""Schemas for the analytic endpoints (moments, characteristic function, bounds)."""

from pydantic import BaseModel

from ...models.reports import MomentReport


class MomentsResponse(BaseModel):
    q: int
    D: int
    moments: list[MomentReport]


class CharfunRow(BaseModel):
    """Truncated series value next to the exact finite product."""
    t: float
    real: float
    imag: float
    last_term: float
    product_real: float
    product_imag: float


class CharfunResponse(BaseModel):
    q: int
    D: int
    r_cap: int
    points: list[CharfunRow]


class BoundsResponse(BaseModel):
    g: int
    q: int
    N: int
    thm1_bound: float
    weil_lo: float
    weil_hi: float
