"""Prints one pass/fail line per acceptance criterion at the end of the run."""

_CRITERIA = {}
_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _CRITERIA[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _CRITERIA:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        passed = report.passed and not hasattr(report, "wasxfail")
        details = "; ".join(f"{k}={v}" for k, v in report.user_properties)
        _OUTCOMES[report.nodeid] = (passed, details)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (number, title) in sorted(_CRITERIA.items(), key=lambda kv: kv[1][0]):
        if nodeid not in _OUTCOMES:
            continue
        passed, details = _OUTCOMES[nodeid]
        line = f"criterion {number} [{title}]: {'PASS' if passed else 'FAIL'}"
        terminalreporter.write_line(line + (f"  ({details})" if details else ""))
