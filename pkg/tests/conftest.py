import numpy as np
import pytest

from deltacomb import Potential


@pytest.fixture
def V3():
    """Mixed-sign potential used for the frozen oracle values."""
    return Potential.from_dict({1: -1.0, 2: 0.5, 4: -0.8})


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get('test_acceptance')
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section('acceptance criteria')
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
