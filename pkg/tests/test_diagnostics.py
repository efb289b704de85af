import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.interpolate import PchipInterpolator

from wavecascade.cases import InitialCondition, project_ic
from wavecascade.diagnostics import (
    EOCError,
    decay_slope,
    eoc_classical,
    eoc_fine_grid,
    eoc_shifted_ratio,
    eoc_three_grid,
    interpolate_monotone_cubic,
    l1_diff,
    linf,
    moment,
    record,
    spectrum_slope,
)
from wavecascade.mesh import custom_grid, uniform_grid

from conftest import random_grid


def test_moment_constant_state():
    grid = uniform_grid(7, 0.25)
    assert moment(grid, np.ones(grid.M), 0) == 7.0


def test_moment_zero_and_order_bounds():
    grid = uniform_grid(2, 0.5)
    for ell in range(9):
        assert moment(grid, np.zeros(4), ell) == 0.0
    with pytest.raises(ValueError):
        moment(grid, np.ones(4), 9)


def test_moment_matches_resummation():
    rng = np.random.default_rng(0)
    grid = random_grid(rng, 30)
    g = rng.random(30)
    for ell in range(4):
        assert moment(grid, g, ell) == pytest.approx(math.fsum(grid.widths * g * grid.pivots**ell), rel=1e-14)


def test_spike_energy_at_fine_resolution():
    # midpoint quadrature of 1.26157*exp(-50(k-1.5)^2) converges to 1.26157*sqrt(pi/50)
    exact = 1.26157 * math.sqrt(math.pi / 50)
    grid = uniform_grid(50, 0.01)
    g0 = project_ic(InitialCondition("spike"), grid)
    assert moment(grid, g0, 0) == pytest.approx(exact, abs=1e-10)
    assert exact == pytest.approx(0.3163, abs=1e-3)


def test_record_fields():
    grid = uniform_grid(2, 0.5)
    g = np.array([0.5, -0.1, 2.0, 0.0])
    r = record(grid, g, 1.5)
    assert r.t == 1.5 and r.linf == 2.0 and r.argmax_k == 1.25
    assert r.neg_count == 1 and r.min_val == -0.1
    row = r.as_row()
    assert row["m0"] == pytest.approx(0.5 * 2.4)


def test_l1_examples():
    grid = uniform_grid(5, 0.5)
    rng = np.random.default_rng(1)
    a = rng.random(grid.M)
    assert l1_diff(a, a, grid) == 0.0
    assert l1_diff(a + 0.3, a, grid) == pytest.approx(0.3 * 5, rel=1e-13)
    b = rng.random(grid.M)
    assert l1_diff(a, b, grid) == pytest.approx(sum(0.5 * abs(x - y) for x, y in zip(a, b)), rel=1e-14)
    with pytest.raises(ValueError):
        l1_diff(a, b[:-1], grid)


def test_moment_zero_is_l1_against_zero():
    rng = np.random.default_rng(2)
    grid = random_grid(rng, 20)
    g = rng.random(20)
    assert moment(grid, g, 0) == pytest.approx(l1_diff(g, np.zeros(20), grid), rel=1e-14)


class TestPchip:
    def test_against_scipy(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            grid = random_grid(rng, int(rng.integers(2, 40)))
            y = rng.random(grid.M) * rng.choice([1.0, 1e-3, 50.0])
            xq = rng.uniform(grid.pivots[0], grid.pivots[-1], 300)
            ref = PchipInterpolator(grid.pivots, y)(xq)
            np.testing.assert_allclose(interpolate_monotone_cubic(grid, y, xq), ref, rtol=1e-12, atol=1e-14 * y.max())

    def test_nodes_exact(self):
        rng = np.random.default_rng(4)
        grid = random_grid(rng, 25)
        y = rng.random(25)
        np.testing.assert_array_equal(interpolate_monotone_cubic(grid, y, grid.pivots), y)

    def test_linear_reproduced(self):
        grid = custom_grid([0, 0.4, 1.0, 1.5, 3.0, 3.2])
        y = 2.0 - 0.7 * grid.pivots
        xq = np.linspace(grid.pivots[0], grid.pivots[-1], 101)
        np.testing.assert_allclose(interpolate_monotone_cubic(grid, y, xq), 2.0 - 0.7 * xq, rtol=0, atol=1e-14)

    def test_clamps_outside(self):
        grid = uniform_grid(3, 1)
        y = np.array([1.0, 2.0, 4.0])
        out = interpolate_monotone_cubic(grid, y, [0.0, 0.1, 2.9, 3.0])
        np.testing.assert_array_equal(out, [1.0, 1.0, 4.0, 4.0])

    def test_needs_two_nodes(self):
        with pytest.raises(ValueError):
            interpolate_monotone_cubic(custom_grid([0, 1]), [1.0], [0.5])

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.floats(-5, 5), min_size=2, max_size=20), st.booleans())
    def test_monotone_data_stays_monotone(self, steps, increasing):
        y = np.cumsum(np.abs(steps))
        if not increasing:
            y = y[::-1]
        grid = uniform_grid(float(len(y)), 1.0)
        xq = np.linspace(grid.pivots[0], grid.pivots[-1], 400)
        v = interpolate_monotone_cubic(grid, y, xq)
        d = np.diff(v)
        tol = 1e-12 * (1 + np.abs(y).max())
        assert np.all(d >= -tol) if increasing else np.all(d <= tol)

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.floats(-5, 5), min_size=2, max_size=20))
    def test_no_new_extrema(self, y):
        y = np.array(y)
        grid = uniform_grid(float(len(y)), 1.0)
        x = grid.pivots
        for j in range(len(y) - 1):
            xq = np.linspace(x[j], x[j + 1], 50)
            v = interpolate_monotone_cubic(grid, y, xq)
            lo, hi = min(y[j], y[j + 1]), max(y[j], y[j + 1])
            tol = 1e-12 * (1 + abs(hi) + abs(lo))
            assert v.min() >= lo - tol and v.max() <= hi + tol


def manufactured_runs(q, C=0.7, h=0.4, times=np.linspace(0, 2, 9)):
    """g_h(t) = 1 + C h^q s(t) on nested grids; the constant reference is reproduced exactly by pchip."""
    s = 0.2 + np.sin(times) ** 2
    runs = []
    for hh in (h, h / 2, h / 4):
        grid = uniform_grid(4.0, hh)
        snaps = np.array([np.full(grid.M, 1.0 + C * hh**q * si) for si in s])
        runs.append((grid, snaps))
    return runs, times, s


@pytest.mark.parametrize("q", [1, 2, 3])
def test_manufactured_three_grid(q):
    runs, times, s = manufactured_runs(q)
    rep = eoc_three_grid(runs, times)
    expected = math.log2((4.0**q - 1.0) / (2.0**q - 1.0) - 1.0)
    assert rep.p_shifted == pytest.approx(expected, abs=1e-9)
    assert abs(rep.p_shifted - q) < 0.05
    assert rep.p_classical == pytest.approx(math.log2(2.0**q), abs=1e-9)
    assert rep.t_max == times[np.argmax(s)]


def test_three_grid_identical_solutions():
    grid = uniform_grid(2, 0.5)
    runs = [(uniform_grid(2, h), np.ones((3, int(2 / h)))) for h in (0.5, 0.25, 0.125)]
    with pytest.raises(EOCError):
        eoc_three_grid(runs)
    del grid


def test_formula_errors():
    with pytest.raises(EOCError):
        eoc_shifted_ratio(1.0, 0.0)
    with pytest.raises(EOCError):
        eoc_shifted_ratio(1.0, 1.0)  # log2(0)
    with pytest.raises(EOCError):
        eoc_classical(0.0, 1.0)


@pytest.mark.parametrize("q", [1, 2, 3])
def test_manufactured_fine_grid(q):
    star = uniform_grid(4.0, 0.0125)
    fine = (star, np.ones(star.M))
    runs = [(uniform_grid(4.0, h), np.full(int(round(4.0 / h)), 1.0 + 0.3 * h**q)) for h in (0.2, 0.1)]
    assert eoc_fine_grid(runs[0], runs[1], fine) == pytest.approx(q, abs=1e-9)


def test_fine_grid_degenerate():
    star = uniform_grid(4.0, 0.0125)
    ref = np.ones(star.M)
    a = (uniform_grid(4.0, 0.2), np.ones(20))
    b = (uniform_grid(4.0, 0.1), np.full(40, 1.1))
    with pytest.raises(EOCError):
        eoc_fine_grid(a, b, (star, ref))
    with pytest.raises(EOCError):
        eoc_fine_grid(b, a, (star, ref))


class TestSlopes:
    t = np.linspace(1.0, 100.0, 200)

    def test_inverse_t(self):
        assert decay_slope(self.t, 3.0 / self.t) == pytest.approx(1.0, abs=1e-6)

    def test_inverse_sqrt(self):
        assert decay_slope(self.t, 3.0 / np.sqrt(self.t)) == pytest.approx(0.5, abs=1e-6)

    def test_constant(self):
        assert decay_slope(self.t, np.full(200, 2.0)) == pytest.approx(0.0, abs=1e-12)

    def test_window_and_errors(self):
        m0 = 1.0 / self.t
        assert decay_slope(self.t, m0, (2.0, 50.0)) == pytest.approx(1.0, abs=1e-9)
        with pytest.raises(ValueError):
            decay_slope(self.t, m0, (0.0, 50.0))
        with pytest.raises(ValueError):
            decay_slope(self.t, m0, (10.0, 11.0))
        bad = m0.copy()
        bad[-1] = 0.0
        with pytest.raises(ValueError):
            decay_slope(self.t, bad)

    def test_spectrum(self):
        grid = uniform_grid(20, 0.1)
        k = grid.pivots
        assert spectrum_slope(grid, k * k**-2.0, (1.0, 10.0)) == pytest.approx(2.0, abs=1e-6)
        assert spectrum_slope(grid, k * 4.0, (1.0, 10.0)) == pytest.approx(0.0, abs=1e-9)
        g = k * k**-2.0
        g[50] = 0.0
        with pytest.raises(ValueError):
            spectrum_slope(grid, g, (1.0, 10.0))
        with pytest.raises(ValueError):
            spectrum_slope(grid, k, (1.0, 30.0))


def test_linf():
    assert linf(np.array([0.1, -3.0, 2.0])) == 3.0
