import numpy as np
import pytest

from varbelief import Distribution, Experiment, StateSpace


@pytest.fixture
def two_states():
    return StateSpace(("H", "L"))


@pytest.fixture
def prior(two_states):
    return Distribution(two_states, [0.25, 0.75])


@pytest.fixture
def experiment(two_states):
    """f(x|.) = (0.8, 0.2) for the realized signal ``x``."""
    return Experiment(two_states, ("x", "y"), np.array([[0.8, 0.2], [0.2, 0.8]]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s[2:4])):
            terminalreporter.write_line(line)
