import numpy as np
import pytest

from mulfrac.core import GridFn, Interval, make_grid


@pytest.fixture
def unit_grid():
    return make_grid(Interval(0.0, 1.0), 2049)


def on_grid(grid, fn, positive=False):
    return GridFn(grid, fn(grid.points), positive=positive)


def rel_err(value, ref):
    value = np.asarray(value, dtype=float)
    ref = np.asarray(ref, dtype=float)
    return float(np.max(np.abs(value - ref) / np.abs(ref)))


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request, capsys):
    """Record one acceptance criterion and print its PASS/FAIL line."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, title, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {title} ({detail})"
        lines.append((number, line))
        with capsys.disabled():
            print("\n" + line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
