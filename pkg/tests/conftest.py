from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from fixture_data import diagram  # noqa: E402


@pytest.fixture
def trefoil():
    return diagram("trefoil_left")


@pytest.fixture
def hopf():
    return diagram("hopf")


@pytest.fixture
def figure_eight():
    return diagram("figure_eight")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number].line())
