import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_")


def pytest_terminal_summary(terminalreporter):
    outcomes = {}
    for key in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(key, []):
            m = _CRITERION.search(getattr(report, "nodeid", ""))
            if m and (report.when == "call" or key != "passed"):
                n = int(m.group(1))
                outcomes[n] = outcomes.get(n, True) and key == "passed"
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(outcomes):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if outcomes[n] else 'FAIL'}")
