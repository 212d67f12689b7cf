"""Shared pytest wiring: surface the acceptance scorecard in the summary."""

SCORECARD: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if SCORECARD:
        terminalreporter.section("acceptance scorecard")
        for line in sorted(SCORECARD):
            terminalreporter.write_line(line)
