"""Shared pytest hooks: surface the acceptance-criterion verdict lines in
the terminal summary (normal capture would otherwise hide them)."""

CRITERION_LINES = []


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
