import logging
import os

import pytest

from subdfo.reporter import Reporter

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run slow tests"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: large-scale runs, only with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def quiet_reporter():
    return Reporter(name="subdfo.tests", level=logging.WARNING)


@pytest.fixture
def manifest_path():
    return os.path.join(DATA_DIR, "manifest.yml")
