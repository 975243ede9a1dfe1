"""
Sweep service.

Runs family sweeps in the background and keeps their summaries in memory.
"""

import asyncio
import logging
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Any, Optional

from ...engine.family import shard_ranges, sweep
from ...engine.summary import SweepConfig, SweepSummary

logger = logging.getLogger(__name__)


class SweepStatus(str, Enum):
    """Sweep job status."""
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    CANCELLED = "cancelled"
    ERROR = "error"


@dataclass
class SweepRun:
    """Tracks one background sweep."""
    id: str
    config: SweepConfig
    status: SweepStatus = SweepStatus.PENDING
    shards_completed: int = 0
    shards_total: int = 0
    started_at: Optional[datetime] = None
    completed_at: Optional[datetime] = None
    result: Optional[SweepSummary] = None
    error: Optional[str] = None
    cancelled: bool = False


class SweepService:
    """Service for managing background sweeps."""

    # Maximum number of sweeps to keep in memory
    MAX_STORED_RUNS = 20

    def __init__(self) -> None:
        self.runs: dict[str, SweepRun] = {}
        self._lock = threading.Lock()

    def _cleanup_old_runs(self) -> None:
        """Drop the oldest finished runs once the limit is reached."""
        with self._lock:
            if len(self.runs) < self.MAX_STORED_RUNS:
                return
            finished = [
                (run_id, run) for run_id, run in self.runs.items()
                if run.status in (SweepStatus.COMPLETED, SweepStatus.ERROR, SweepStatus.CANCELLED)
                and run.completed_at is not None
            ]
            finished.sort(key=lambda item: item[1].completed_at or datetime.min)
            excess = len(self.runs) - self.MAX_STORED_RUNS + 1
            for run_id, _ in finished[:excess]:
                del self.runs[run_id]

    def create_sweep(self, config: dict[str, Any]) -> str:
        """Register a sweep; the config dict holds SweepConfig fields."""
        self._cleanup_old_runs()
        cfg = SweepConfig(**config)
        run = SweepRun(id=str(uuid.uuid4()), config=cfg, shards_total=len(shard_ranges(cfg)))
        with self._lock:
            self.runs[run.id] = run
        return run.id

    def get_run(self, sweep_id: str) -> Optional[SweepRun]:
        with self._lock:
            return self.runs.get(sweep_id)

    def cancel_run(self, sweep_id: str) -> bool:
        """Ask a pending or running sweep to stop after the current shard."""
        with self._lock:
            run = self.runs.get(sweep_id)
        if run and run.status in (SweepStatus.PENDING, SweepStatus.RUNNING):
            run.cancelled = True
            run.status = SweepStatus.CANCELLED
            run.completed_at = datetime.now()
            return True
        return False

    def _run_sweep_sync(self, sweep_id: str) -> None:
        """Execute the sweep (called from the default thread pool)."""
        run = self.get_run(sweep_id)
        if run is None:
            return

        def progress(done: int, total: int) -> None:
            run.shards_completed = done
            run.shards_total = total

        try:
            summary = sweep(run.config, progress=progress, should_stop=lambda: run.cancelled)
            if not run.cancelled:
                run.result = summary
                run.status = SweepStatus.COMPLETED
        except Exception as exc:
            logger.exception("sweep %s failed", sweep_id)
            run.status = SweepStatus.ERROR
            run.error = str(exc)
        if run.completed_at is None:
            run.completed_at = datetime.now()

    async def run_sweep(self, sweep_id: str) -> None:
        """Execute a sweep without blocking the event loop."""
        run = self.get_run(sweep_id)
        if run is None or run.cancelled:
            return
        run.status = SweepStatus.RUNNING
        run.started_at = datetime.now()
        loop = asyncio.get_running_loop()
        await loop.run_in_executor(None, self._run_sweep_sync, sweep_id)


# Global service instance
sweep_service = SweepService()
