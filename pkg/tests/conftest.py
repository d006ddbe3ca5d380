"""Shared acceptance-line reporting: one PASS/FAIL line per criterion,
echoed in the terminal summary regardless of capture settings."""

ACCEPTANCE_LINES = []


def record(num: int, name: str, ok: bool, detail: str = "") -> str:
    status = "PASS" if ok else "FAIL"
    line = f"[criterion {num:02d}] {status} {name}"
    if detail:
        line += f" :: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line, flush=True)
    return line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
