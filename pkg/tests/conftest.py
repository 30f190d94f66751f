import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def report_line():
    """Collects one summary line per acceptance criterion."""

    def add(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)

    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
