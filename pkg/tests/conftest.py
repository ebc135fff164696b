"""Shared pytest hooks: the acceptance gate reports one line per criterion."""
import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record ``(name, passed, detail)`` and echo it; the summary hook reprints all of them."""

    def _report(name, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
