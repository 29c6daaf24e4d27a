import pytest

from heatpanel.panel import parse_panel_csv
from heatpanel.reference import bundled_fixture_path

MINIMAL_CSV = (
    "region_id,year,variable,value\n"
    "a,2003,lst,1.0\n"
    "a,2004,lst,2.0\n"
    "b,2003,lst,3.5\n"
    "b,2004,lst,3.0\n"
)

_acceptance = []


@pytest.fixture
def minimal_csv():
    return MINIMAL_CSV


@pytest.fixture
def minimal_panel():
    return parse_panel_csv(MINIMAL_CSV)


@pytest.fixture
def separable_path():
    return str(bundled_fixture_path("separable.csv"))


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
