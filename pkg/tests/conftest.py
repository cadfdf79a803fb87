import pytest

from spt.fixtures import path, read
from spt.policy import parse_policy
from spt.topology import parse_topology

_criteria = []


@pytest.fixture
def ref11():
    return parse_topology(read("ref11.topo"))


@pytest.fixture
def ref_policy():
    return parse_policy(read("ref_policy.spm"))


@pytest.fixture
def data_dir():
    return str(path("ref11.topo").parent)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        _criteria.append((marker.args[0], marker.args[1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_criteria):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")
