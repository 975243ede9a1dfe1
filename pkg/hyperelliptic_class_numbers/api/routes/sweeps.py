"""
Family sweep API routes.
"""

from datetime import datetime

from fastapi import APIRouter, BackgroundTasks, HTTPException

from ...engine.family import (
    empirical_charfun,
    empirical_moment,
    ks_statistic,
    scaled_mean,
    scaled_variance,
)
from ...engine.summary import SweepSummary
from ...models.base import SweepMode
from ..config import config as app_config
from ..schemas.sweeps import (
    HistogramBin,
    SweepConfigRequest,
    SweepResultResponse,
    SweepStartResponse,
    SweepStatusResponse,
)
from ..services.sweep_service import SweepStatus, sweep_service

router = APIRouter()


@router.post("/run", response_model=SweepStartResponse)
async def run_sweep(
    config: SweepConfigRequest,
    background_tasks: BackgroundTasks,
) -> SweepStartResponse:
    """Start a background sweep."""
    if not app_config.sweeps_enabled:
        raise HTTPException(status_code=403, detail="Sweeps are disabled on this server")
    try:
        sweep_id = sweep_service.create_sweep(config.model_dump())
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    background_tasks.add_task(sweep_service.run_sweep, sweep_id)

    if config.mode == SweepMode.EXHAUSTIVE:
        total = config.q**config.d - config.q ** (config.d - 1)
    else:
        total = config.sample_count
    return SweepStartResponse(sweep_id=sweep_id, curves_total=total)


@router.get("/{sweep_id}/status", response_model=SweepStatusResponse)
async def get_sweep_status(sweep_id: str) -> SweepStatusResponse:
    """Get status of a sweep."""
    run = sweep_service.get_run(sweep_id)
    if not run:
        raise HTTPException(status_code=404, detail="Sweep not found")

    progress = run.shards_completed / run.shards_total if run.shards_total > 0 else 0.0

    eta = None
    if run.shards_completed > 0 and run.started_at and run.status == SweepStatus.RUNNING:
        elapsed = (datetime.now() - run.started_at).total_seconds()
        rate = run.shards_completed / elapsed if elapsed > 0 else 0.0
        if rate > 0:
            eta = (run.shards_total - run.shards_completed) / rate

    return SweepStatusResponse(
        sweep_id=run.id,
        status=run.status.value,
        shards_completed=run.shards_completed,
        shards_total=run.shards_total,
        progress=min(progress, 1.0),
        estimated_time_remaining_seconds=eta,
        message=run.error if run.status == SweepStatus.ERROR else None,
        started_at=run.started_at,
        completed_at=run.completed_at,
    )


@router.post("/{sweep_id}/cancel")
async def cancel_sweep(sweep_id: str) -> dict[str, str]:
    """Cancel a pending or running sweep."""
    run = sweep_service.get_run(sweep_id)
    if not run:
        raise HTTPException(status_code=404, detail="Sweep not found")
    if not sweep_service.cancel_run(sweep_id):
        raise HTTPException(status_code=400, detail="Cannot cancel this sweep")
    return {"status": "cancelled"}


def _histogram(summary: SweepSummary) -> list[HistogramBin]:
    edges = summary.hist_edges
    return [
        HistogramBin(bin_start=float(edges[i]), bin_end=float(edges[i + 1]), count=int(count))
        for i, count in enumerate(summary.hist_counts.tolist())
    ]


@router.get("/{sweep_id}/result", response_model=SweepResultResponse)
async def get_sweep_result(sweep_id: str) -> SweepResultResponse:
    """Statistics of a completed sweep."""
    run = sweep_service.get_run(sweep_id)
    if not run:
        raise HTTPException(status_code=404, detail="Sweep not found")
    if run.status != SweepStatus.COMPLETED:
        raise HTTPException(
            status_code=400,
            detail=f"Results not available. Status: {run.status.value}",
        )
    summary = run.result
    if summary is None or summary.count == 0:
        raise HTTPException(status_code=500, detail="Results missing")

    cfg = run.config
    charfun = {}
    for t in summary.t_grid:
        value = empirical_charfun(summary, t)
        charfun[format(t, "g")] = (value.real, value.imag)

    return SweepResultResponse(
        sweep_id=sweep_id,
        config={
            "q": cfg.q,
            "d": cfg.d,
            "mode": cfg.mode.value,
            "sample_count": cfg.sample_count,
            "rng_seed": cfg.rng_seed,
            "method": cfg.method.value,
            "worker_count": cfg.worker_count,
        },
        count=summary.count,
        violations=summary.violations,
        violation_examples=list(summary.violation_examples),
        rh_max_deviation=summary.rh_max_deviation,
        nf_min=summary.nf_min,
        nf_max=summary.nf_max,
        moments={r: empirical_moment(summary, r) for r in range(1, summary.r_max + 1)},
        scaled_mean=scaled_mean(summary),
        scaled_variance=scaled_variance(summary),
        ks=ks_statistic(summary),
        tail_ratios={
            format(psi, "g"): count / summary.count
            for psi, count in zip(summary.psi_grid, summary.tail_counts)
        },
        charfun=charfun,
        histogram=_histogram(summary),
    )
