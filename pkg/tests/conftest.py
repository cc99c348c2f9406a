from __future__ import annotations

import pytest
from hypothesis import settings

from vgc import matrix_groups as mg
from vgc import surface_action as sa

settings.register_profile("vgc", max_examples=60, deadline=None)
settings.load_profile("vgc")


@pytest.fixture(scope="session")
def rho_defn():
    return mg.load_fixture_group("s4_rho")


@pytest.fixture(scope="session")
def rho_table(rho_defn):
    return rho_defn.closure()


@pytest.fixture(scope="session")
def g216_defn():
    return mg.load_fixture_group("g216")


@pytest.fixture(scope="session")
def g216_table(g216_defn):
    return g216_defn.closure()


@pytest.fixture(scope="session")
def maps(rho_defn):
    return sa.s4_maps(rho_defn)


@pytest.fixture(scope="session")
def action_table(rho_defn):
    return sa.s4_action_table(rho_defn)


@pytest.fixture(scope="session")
def points():
    return sa.published_points()


@pytest.fixture(scope="session")
def classification(action_table):
    return sa.classify_small_orbits(action_table, 6)


# acceptance criteria bookkeeping: one summary line per criterion

_CRITERIA: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    num, title = marker
    ok = report.passed if report.when == "call" else not report.failed
    prev = _CRITERIA.get(num, (title, True))
    _CRITERIA[num] = (title, prev[1] and ok and not report.skipped)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, ok = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {title}")
