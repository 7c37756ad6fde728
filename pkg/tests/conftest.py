import numpy as np
import pytest

from coevo.config import SimulationConfig
from coevo.simulation import run_simulation

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def default_run():
    return run_simulation(SimulationConfig(), seed=7)


@pytest.fixture(scope="session")
def small_config():
    # three years, a few papers per issue; runs in well under a second
    return SimulationConfig(years=3, issues_per_year=12, base_papers_per_issue=3, papers_increment_per_year=1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
