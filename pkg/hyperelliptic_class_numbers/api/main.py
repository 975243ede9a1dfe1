"""
FastAPI application entry point.

Run with ``uvicorn hyperelliptic_class_numbers.api.main:app``.
"""

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from .. import __version__
from ..config import config as library_config
from .config import config
from .routes import analytics, curves, sweeps

app = FastAPI(
    title="Hyperelliptic Class Numbers API",
    description="L-polynomials, class number statistics and their limiting distribution",
    version=__version__,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=config.cors_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(curves.router, prefix="/api/curves", tags=["curves"])
app.include_router(analytics.router, prefix="/api/analytics", tags=["analytics"])
app.include_router(sweeps.router, prefix="/api/sweeps", tags=["sweeps"])


@app.get("/api/health")
async def health_check() -> dict[str, str]:
    """Health check endpoint."""
    return {"status": "healthy", "service": "hyperelliptic-class-numbers"}


@app.get("/api/config")
async def get_config() -> dict[str, object]:
    """Public request limits."""
    return {
        "maxSweepCurves": config.max_sweep_curves,
        "defaultSampleCount": config.default_sample_count,
        "sweepsEnabled": config.sweeps_enabled,
        "maxWorkers": library_config.max_workers,
        "exhaustiveBudget": library_config.exhaustive_budget,
    }


@app.get("/")
async def root() -> dict[str, str]:
    return {
        "name": "Hyperelliptic Class Numbers API",
        "version": __version__,
        "docs": "/docs",
    }
