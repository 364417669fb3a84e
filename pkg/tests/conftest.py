import pytest
from hypothesis import settings

from breuil_lattices.padic import PadicContext

settings.register_profile("ci", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("ci")

# lines collected by test_acceptance and echoed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def ctx2():
    return PadicContext(5, 2, 16)


@pytest.fixture(scope="session")
def ctx4():
    return PadicContext(5, 4, 24)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
