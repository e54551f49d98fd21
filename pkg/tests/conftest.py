"""Terminal reporting for the acceptance suite: one PASS/FAIL line per criterion."""

_acceptance_reports: list[tuple[str, str, float]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    outcome = "PASS" if report.passed else "FAIL"
    _acceptance_reports.append((name, outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_reports:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome, duration in _acceptance_reports:
        terminalreporter.write_line(f"{outcome}  {name}  ({duration:.2f}s)")
