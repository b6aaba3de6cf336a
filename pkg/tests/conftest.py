"""Shared pytest hooks: print the acceptance-criterion scoreboard."""

RESULTS = []


def record(criterion: str, passed: bool, detail: str = ""):
    RESULTS.append((criterion, bool(passed), detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in RESULTS:
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] {criterion}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
