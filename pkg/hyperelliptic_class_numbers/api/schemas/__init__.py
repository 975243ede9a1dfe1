"""Request and response schemas for the API."""

from .analytics import (
    BoundsResponse,
    CharfunResponse,
    CharfunRow,
    MomentsResponse,
)
from .curves import (
    LPolyRequest,
    LPolyResponse,
)
from .sweeps import (
    HistogramBin,
    SweepConfigRequest,
    SweepResultResponse,
    SweepStartResponse,
    SweepStatusResponse,
)

__all__ = [
    # Analytics
    "BoundsResponse",
    "CharfunResponse",
    "CharfunRow",
    "MomentsResponse",

    # Curves
    "LPolyRequest",
    "LPolyResponse",

    # Sweeps
    "HistogramBin",
    "SweepConfigRequest",
    "SweepResultResponse",
    "SweepStartResponse",
    "SweepStatusResponse",
]
