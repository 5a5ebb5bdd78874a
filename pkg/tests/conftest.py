from __future__ import annotations

import pytest

from heytica.limit import new_chain, saturate


@pytest.fixture(scope="session")
def saturated():
    """A saturate(3, 2) chain; tests must not grow it in place."""
    return saturate(new_chain(), 3, 2)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
