"""Shared test plumbing: collects acceptance-criterion result lines and echoes
them in the terminal summary so they are visible even with output capture on."""

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def criterion_log():
    """Append one '[PASS]/[FAIL] criterion ...' line per acceptance criterion."""
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
