import numpy as np
import pytest

from leonard_bethe import TABLE1_PARAMS, ParamSet
from leonard_bethe.verify import random_params

_LOG = pytest.StashKey[list]()


@pytest.fixture
def table1():
    return TABLE1_PARAMS


@pytest.fixture
def half():
    return ParamSet(1.4, 0.9, 0.8, 1.3, 0.7, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def draw_params():
    """Factory for reproducible generic parameter sets."""
    def make(two_s, seed=0, complex_params=False):
        return random_params(np.random.default_rng([two_s, seed]), two_s, complex_params)
    return make


@pytest.fixture
def acceptance_log(request):
    """Append one summary line per acceptance criterion."""
    log = request.config.stash.setdefault(_LOG, [])
    return log.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LOG, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line)
