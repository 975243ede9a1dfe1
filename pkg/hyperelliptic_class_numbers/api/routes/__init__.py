"""API routers."""

from . import analytics, curves, sweeps

__all__ = ["analytics", "curves", "sweeps"]
