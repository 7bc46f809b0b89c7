import pytest

from memosc import CircuitParams
from memosc.experiments import NOMINAL_CIRCUIT, nominal_memristor

ACCEPTANCE_LINES = []


@pytest.fixture
def nominal_m():
    return nominal_memristor()


@pytest.fixture
def nominal_c() -> CircuitParams:
    return NOMINAL_CIRCUIT


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
