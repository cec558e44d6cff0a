import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qpnoise import ALUMINUM, QpDistribution  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture
def al():
    return ALUMINUM


@pytest.fixture(params=[0.0, 1e-7, 1e-5], ids=lambda x: f"x{x:g}")
def dist(request):
    return QpDistribution(request.param)


@pytest.fixture
def report():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
