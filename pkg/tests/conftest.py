import pytest

from canforge import builtin_scenario, leftward_command_tape, run_scenario

#: One line per acceptance criterion, printed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bundled_tape():
    return leftward_command_tape()


@pytest.fixture(scope="session")
def scenario1_records():
    """Scenario 1 with the default (window) labeling, seed 42."""
    return run_scenario(builtin_scenario(1), seed=42)
