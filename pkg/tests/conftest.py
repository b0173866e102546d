import pytest

from taulab import arith

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def table_1e6():
    return arith.sieve_mangoldt(10**6)


@pytest.fixture(scope="session")
def table_1e4():
    return arith.sieve_mangoldt(10**4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
