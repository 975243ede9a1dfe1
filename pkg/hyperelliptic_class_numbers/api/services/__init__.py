"""Background job services."""

from .sweep_service import SweepRun, SweepService, SweepStatus, sweep_service

__all__ = ["SweepRun", "SweepService", "SweepStatus", "sweep_service"]
