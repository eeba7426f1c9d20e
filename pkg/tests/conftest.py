import time

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qaoa_tn import Angles, Graph, random_regular
from qaoa_tn.graphs import complete_graph

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SESSION_START = time.perf_counter()
# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
    elapsed = time.perf_counter() - SESSION_START
    terminalreporter.write_line(f"full suite wall time: {elapsed:.1f} s")


@pytest.fixture
def triangle():
    return Graph(3, ((0, 1), (1, 2), (0, 2)))


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def single_edge():
    return Graph(2, ((0, 1),))


@pytest.fixture(scope="session")
def cubic8():
    return random_regular(8, 3, seed=11)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def angles_p2():
    return Angles((0.4, 1.1), (0.7, 0.2))


def pytest_collection_modifyitems(items):
    """Run the suite-wall-time check after everything else."""
    last = [it for it in items if it.name == "test_c10_suite_time"]
    items[:] = [it for it in items if it.name != "test_c10_suite_time"] + last
