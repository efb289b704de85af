import numpy as np
import pytest

from wavecascade.kernel import KernelSpec
from wavecascade.mesh import custom_grid, uniform_grid


@pytest.fixture
def three_cell():
    """Unit cells with pivots 0.5, 1.5, 2.5, g = 1 and gamma = 2."""
    return uniform_grid(3.0, 1.0), KernelSpec(2.0), np.ones(3)


def random_grid(rng, M, R=None, uniform=None):
    if uniform is None:
        uniform = rng.random() < 0.5
    R = float(rng.uniform(1.0, 8.0)) if R is None else R
    if uniform:
        return uniform_grid(R, R / M)
    cuts = np.sort(rng.uniform(0.0, R, size=M - 1))
    widths = np.diff(np.concatenate(([0.0], cuts, [R])))
    # keep widths bounded away from zero
    widths = widths + 0.05 * R / M
    return custom_grid(np.concatenate(([0.0], np.cumsum(widths))))


_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(tag, ok, detail)."""

    def note(tag, ok, detail):
        line = f"{tag:<5} {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA.append(line)
        print(line)
        return ok

    return note


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
