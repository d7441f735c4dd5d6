import pytest
from hypothesis import strategies as st

from simpsonkit.table_model import CohortCount, PreferenceTable

TABLE1 = PreferenceTable.from_counts(
    ["Treatment 1", "Treatment 2"], ["Agent 1", "Agent 2", "Agent 3"],
    [[(0, 1), (3, 4), (3, 5)],
     [(1, 5), (1, 1), (3, 4)]])

TABLE2 = PreferenceTable.from_counts(
    ["Treatment 1", "Treatment 2"], [f"Agent {i}" for i in range(1, 7)],
    [[(5, 8), (23, 27), (15, 24), (68, 81), (55, 80), (234, 270)],
     [(19, 26), (8, 9), (57, 78), (23, 27), (192, 263), (81, 87)]])

TABLE5 = PreferenceTable.from_counts(
    ["A", "B", "C"], ["Group 1", "Group 2"],
    [[(1, 10), (69, 90)],
     [(10, 50), (40, 50)],
     [(22, 80), (18, 20)]])


@pytest.fixture
def table1():
    return TABLE1


@pytest.fixture
def table2():
    return TABLE2


@pytest.fixture
def table5():
    return TABLE5


@st.composite
def cells(draw, max_trials=30):
    trials = draw(st.integers(1, max_trials))
    return CohortCount(draw(st.integers(0, trials)), trials)


@st.composite
def tables(draw, m=st.integers(2, 4), n=st.integers(1, 6), max_trials=30):
    m, n = draw(m), draw(n)
    rows = [[draw(cells(max_trials)) for _ in range(n)] for _ in range(m)]
    return PreferenceTable([f"alt{i}" for i in range(m)], [f"g{j}" for j in range(n)], rows)


# acceptance reporting: one PASS/FAIL line per criterion in the terminal summary

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _criteria.append((marker.args[0], marker.args[1], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed in sorted(_criteria, key=lambda c: int(c[0])):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {number:>2}. {title}")
