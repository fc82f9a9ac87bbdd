import random

import pytest

# Filled by test_acceptance.py; echoed after the run so the verdict lines
# stay visible even when pytest captures per-test output.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return random.Random(20260822)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
