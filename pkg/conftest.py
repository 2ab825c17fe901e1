"""Root pytest configuration: the --run-slow switch for statistical acceptance runs."""

import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="run slow statistical acceptance tests",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running statistical acceptance test")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
