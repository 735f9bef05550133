import numpy as np
import pytest

from wcheb import Circle, IntervalUnion, Poly, Preimage

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    k = mark.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        prev = _criteria.get(k, True)
        _criteria[k] = prev and rep.passed
        item.config._criterion_notes = getattr(item.config, "_criterion_notes", {})
        item.config._criterion_notes.setdefault(k, []).append(
            f"{item.name}: {'ok' if rep.passed else 'failed'}")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    notes = getattr(tr.config, "_criterion_notes", {})
    for k in sorted(_criteria):
        tr.write_line(f"criterion {k:2d}: {'PASS' if _criteria[k] else 'FAIL'}  ({'; '.join(notes.get(k, []))})")


@pytest.fixture
def unit_interval():
    return IntervalUnion([(-1.0, 1.0)])


@pytest.fixture
def unit_circle():
    return Circle()


@pytest.fixture
def two_intervals():
    # z^2 - 2 pulls [-1, 1] back to [-sqrt3, -1] U [1, sqrt3]
    return Preimage(Poly([-2.0, 0.0, 1.0]), IntervalUnion([(-1.0, 1.0)]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
