import pytest


def pytest_configure(config):
    config._acceptance_log = {}


@pytest.fixture
def acceptance(request):
    """record(criterion, label, ok, detail) logs one checked entry and asserts it."""
    log = request.config._acceptance_log

    def record(criterion: int, label: str, ok: bool, detail: str = "") -> None:
        log.setdefault(criterion, []).append((label, bool(ok), detail))
        status = "PASS" if ok else "FAIL"
        print(f"[criterion {criterion}] {label}: {status} {detail}".rstrip())
        assert ok, f"criterion {criterion}, {label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config._acceptance_log
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(log):
        entries = log[criterion]
        failed = [label for label, ok, _ in entries if not ok]
        status = "FAIL" if failed else "PASS"
        line = f"criterion {criterion}: {status} ({len(entries) - len(failed)}/{len(entries)} entries)"
        if failed:
            line += "; failing: " + ", ".join(failed)
        terminalreporter.write_line(line)
