"""
Single-curve API routes.
"""

from fastapi import APIRouter, HTTPException

from ...engine.bounds import verify_curve
from ...engine.ffield import FieldCtx
from ...engine.lfunc import curve_record, l_polynomial
from ..schemas.curves import LPolyRequest, LPolyResponse

router = APIRouter()


@router.post("/lpoly", response_model=LPolyResponse)
async def compute_lpoly(request: LPolyRequest) -> LPolyResponse:
    """L-polynomial, class number and N_F of y^2 = F(x)."""
    try:
        f = FieldCtx(request.q).parse(request.coefficients)
        lpoly = l_polynomial(f, request.method)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc

    record = curve_record(f, lpoly)
    return LPolyResponse(
        q=f.q,
        d=f.degree,
        g=lpoly.g,
        coeffs=list(lpoly.coeffs),
        power_sums=list(lpoly.power_sums),
        class_number=lpoly.class_number,
        n_f=record.n_f,
        verdict=verify_curve(record),
    )
