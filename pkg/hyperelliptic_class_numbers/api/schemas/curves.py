"""Schemas for single-curve endpoints."""

from pydantic import BaseModel, Field

from ...models.base import LPolyMethod
from ...models.curves import CurveVerdict


class LPolyRequest(BaseModel):
    """A curve y^2 = F(x) given by q and the ascending coefficients of F."""
    q: int = Field(..., ge=3, le=10**6, description="Odd prime field size")
    coefficients: str = Field(..., min_length=1, description='Ascending, e.g. "1,2,0,1"')
    method: LPolyMethod = LPolyMethod.NEWTON


class LPolyResponse(BaseModel):
    q: int
    d: int
    g: int
    coeffs: list[int]
    power_sums: list[int]
    class_number: int
    n_f: float
    verdict: CurveVerdict
