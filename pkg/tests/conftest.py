"""Shared pytest plumbing: print one pass/fail line per acceptance criterion."""
import re

_ACCEPTANCE_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    match = re.search(r"test_acceptance\.py.*criterion_(\d+)", report.nodeid)
    if match:
        num = int(match.group(1))
        _ACCEPTANCE_RESULTS[num] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE_RESULTS):
        outcome = _ACCEPTANCE_RESULTS[num]
        line = f"criterion {num:2d}: {'PASS' if outcome == 'passed' else 'FAIL'}"
        terminalreporter.write_line(line)
