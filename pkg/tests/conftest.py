import sys

import pytest

from droneplan.fixture import FIXTURE_CONFIG, write_fixture
from droneplan.pipeline import run_plan


@pytest.fixture(scope="session")
def city(tmp_path_factory):
    """Paths of the synthetic city dataset (roads, subareas, config)."""
    return write_fixture(tmp_path_factory.mktemp("city"))


@pytest.fixture(scope="session")
def city_run(city):
    return run_plan(city["roads"], city["subareas"], FIXTURE_CONFIG)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
