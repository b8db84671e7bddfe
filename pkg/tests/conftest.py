import pytest

from knotchar import Knot


@pytest.fixture(scope="session")
def fig8():
    knot = Knot("fig8")
    knot.apoly  # warm the cache once for the whole session
    return knot


# -- acceptance reporting ---------------------------------------------------

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    number, title = mark.args
    prev = _criteria.get(number, (title, "PASS", 0.0))
    status = prev[1] if rep.passed else ("SKIP" if rep.skipped else "FAIL")
    _criteria[number] = (title, status, prev[2] + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status, secs = _criteria[number]
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title} ({secs:.2f}s)")
