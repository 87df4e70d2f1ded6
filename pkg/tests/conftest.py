"""Shared pytest hooks.

The acceptance tests register one summary line per criterion in
ACCEPTANCE_LINES; the terminal-summary hook prints the whole table at the
end of the run so a plain `pytest` always shows the per-criterion verdicts.
"""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
