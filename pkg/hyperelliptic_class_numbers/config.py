"""
Library configuration loaded from environment variables.
"""

import logging
import os
from dataclasses import dataclass


@dataclass
class LibraryConfig:
    """Runtime limits for tables, enumeration and worker pools."""

    # Residue classes allowed in a single squares table (and in a symbol cache overall)
    table_budget: int = 2**24

    # Largest q^d an exhaustive sweep may enumerate
    exhaustive_budget: int = 2 * 10**7

    # Largest (#family x sum_{n<d} q^n) the charsum oracle may spend on one family
    charsum_budget: int = 10**7

    # Worker processes for sweeps
    max_workers: int = 8

    # Enumeration indices per shard; fixed so results never depend on worker count
    shard_size: int = 2**15

    log_level: str = "WARNING"

    # Verify irreducibility of every prime handed to legendre_symbol
    debug_checks: bool = False

    def __post_init__(self):
        if self.table_budget < 1:
            raise ValueError(f"table_budget must be positive, got {self.table_budget}")
        if self.exhaustive_budget < 1:
            raise ValueError(
                f"exhaustive_budget must be positive, got {self.exhaustive_budget}"
            )
        if self.charsum_budget < 1:
            raise ValueError(f"charsum_budget must be positive, got {self.charsum_budget}")
        if not (1 <= self.max_workers <= 8):
            raise ValueError(f"max_workers must be between 1 and 8, got {self.max_workers}")
        if self.shard_size < 1:
            raise ValueError(f"shard_size must be positive, got {self.shard_size}")
        if logging.getLevelName(self.log_level.upper()) not in (
            logging.DEBUG, logging.INFO, logging.WARNING, logging.ERROR, logging.CRITICAL
        ):
            raise ValueError(f"unknown log_level {self.log_level!r}")

    @classmethod
    def from_env(cls) -> "LibraryConfig":
        """Load configuration from environment variables."""
        workers = int(os.getenv("HYPERJAC_MAX_WORKERS", str(min(8, os.cpu_count() or 1))))
        # Cap at 8 workers
        workers = max(1, min(workers, 8))

        debug = os.getenv("HYPERJAC_DEBUG", "false").lower() in ("true", "1", "yes")

        return cls(
            table_budget=int(os.getenv("HYPERJAC_TABLE_BUDGET", str(2**24))),
            exhaustive_budget=int(os.getenv("HYPERJAC_EXHAUSTIVE_BUDGET", str(2 * 10**7))),
            charsum_budget=int(os.getenv("HYPERJAC_CHARSUM_BUDGET", str(10**7))),
            max_workers=workers,
            shard_size=int(os.getenv("HYPERJAC_SHARD_SIZE", str(2**15))),
            log_level=os.getenv("HYPERJAC_LOG_LEVEL", "WARNING"),
            debug_checks=debug,
        )


# Global config instance - loaded once at import
config = LibraryConfig.from_env()
