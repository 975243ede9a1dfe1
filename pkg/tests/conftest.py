"""Shared fixtures and the --runslow switch."""

import pytest

from hyperelliptic_class_numbers.config import config as library_config
from hyperelliptic_class_numbers.engine.ffield import FieldCtx


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run slow experiments")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running experiment, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def f3():
    """The field F_3."""
    return FieldCtx(3)


@pytest.fixture
def f5():
    """The field F_5."""
    return FieldCtx(5)


@pytest.fixture
def small_shards(monkeypatch):
    """Shrink shards so tiny families still split into several."""
    monkeypatch.setattr(library_config, "shard_size", 16)
    return 16
