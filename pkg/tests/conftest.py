"""Shared pytest plumbing.

The acceptance module records one human-readable line per criterion in
ACCEPTANCE_LINES; they are echoed in the terminal summary so every run of
the suite shows the full pass/fail scoreboard regardless of capture mode.
"""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
