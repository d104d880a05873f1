import pytest

from latgreen import validation

# filled by test_acceptance; echoed after the run so the lines land in the log
ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def suite_report():
    return validation.run_identity_suite()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
