import numpy as np
import pytest
from hypothesis import settings

# reproducible runs; numerical kernels have uneven timing
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

# filled by test_acceptance.py and echoed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
