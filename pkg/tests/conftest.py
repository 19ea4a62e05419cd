import pytest

# lines recorded by test_acceptance, echoed once at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log():
    def log(line: str) -> None:
        print(line)
        ACCEPTANCE_LINES.append(line)

    return log
