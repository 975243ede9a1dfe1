"""
Analytic API routes: limiting moments, characteristic function and bounds.
"""

from fastapi import APIRouter, HTTPException, Query

from ...engine.bounds import thm1_bound, weil_interval
from ...engine.moments import H_moment, TruncationCtx, charfun_product, charfun_truncated
from ..schemas.analytics import BoundsResponse, CharfunResponse, CharfunRow, MomentsResponse

router = APIRouter()

# Prime-degree truncation allowed per request
MAX_TRUNCATION = 24


def _context(q: int, D: int) -> TruncationCtx:
    try:
        return TruncationCtx(q=q, D=D)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@router.get("/moments", response_model=MomentsResponse)
async def get_moments(
    q: int = Query(..., ge=3),
    D: int = Query(default=8, ge=1, le=MAX_TRUNCATION),
    s: list[int] = Query(default=[1, 2, 3, 4]),
    oracle: bool = False,
) -> MomentsResponse:
    """Truncated H(s) with tail bounds and the large-q comparator."""
    ctx = _context(q, D)
    try:
        reports = [H_moment(value, ctx, oracle=oracle) for value in s]
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return MomentsResponse(q=q, D=D, moments=reports)


@router.get("/charfun", response_model=CharfunResponse)
async def get_charfun(
    q: int = Query(..., ge=3),
    D: int = Query(default=8, ge=1, le=MAX_TRUNCATION),
    t: list[float] = Query(default=[0.5, 1.0, 2.0]),
    r_cap: int = Query(default=8, ge=1, le=10),
) -> CharfunResponse:
    """Truncated characteristic function next to the finite product."""
    ctx = _context(q, D)
    points = []
    try:
        for value in t:
            point = charfun_truncated(value, ctx, r_cap)
            product = charfun_product(value, ctx)
            points.append(CharfunRow(
                t=value,
                real=point.real,
                imag=point.imag,
                last_term=point.last_term,
                product_real=product.real,
                product_imag=product.imag,
            ))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return CharfunResponse(q=q, D=D, r_cap=r_cap, points=points)


@router.get("/bounds", response_model=BoundsResponse)
async def get_bounds(
    g: int = Query(..., ge=1),
    q: int = Query(..., ge=3),
    N: int = Query(default=2, ge=2),
) -> BoundsResponse:
    """Class number bound and Weil interval for genus g over F_q."""
    lo, hi = weil_interval(g, q)
    return BoundsResponse(g=g, q=q, N=N, thm1_bound=thm1_bound(g, q, N), weil_lo=lo, weil_hi=hi)
