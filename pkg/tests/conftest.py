import re

import pytest

_CRITERION = re.compile(r"test_criterion_(\d+)")
_results: dict = {}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="also run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow; pass --runslow to include")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m or "[" in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        detail = dict(report.user_properties).get("measured", "")
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        _results[int(m.group(1))] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_results):
        status, detail = _results[k]
        terminalreporter.write_line(f"{status} criterion {k:2d}: {detail}")
