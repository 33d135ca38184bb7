"""Shared pytest wiring: the acceptance scoreboard.

Acceptance tests append one PASS/FAIL line each; the hook below prints the
collected scoreboard after the run summary, outside pytest's output capture,
so the per-criterion verdicts are always visible in the run log.
"""

from __future__ import annotations

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def scoreboard() -> list[str]:
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance scoreboard")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
