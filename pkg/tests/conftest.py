import re
import time

import pytest

from realsph import cli, specio

_CRIT = re.compile(r"test_criterion_(\d+)")
_outcomes: dict = {}


@pytest.fixture(scope="session")
def built():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = specio.build(specio.load(name))
        return cache[name]

    return get


@pytest.fixture(scope="session")
def reports():
    """Full analyze reports for the bundled examples, computed once."""
    cache = {}

    def get(name):
        if name not in cache:
            t0 = time.perf_counter()
            cache[name] = cli.analyze(specio.load(name), cli.Options(seed=0))
            cache[name]["_elapsed"] = time.perf_counter() - t0
        return cache[name]

    return get


def pytest_runtest_logreport(report):
    m = _CRIT.search(report.nodeid)
    if not m or "test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or report.outcome == "failed":
        n = int(m.group(1))
        prev = _outcomes.get(n, "PASS")
        _outcomes[n] = "FAIL" if report.outcome == "failed" or prev == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        terminalreporter.write_line("criterion %d: %s" % (n, _outcomes[n]))
