import math
import warnings

import numpy as np
import pytest

from wavecascade.cases import InitialCondition, preset, project_ic
from wavecascade.collision import EnergyState, collision_rate, composite_flux_fast
from wavecascade.integrate import (
    CflWarning,
    InstabilityError,
    IntegratorConfig,
    cfl_bound,
    integrate,
    n_steps_for,
    run,
    step_euler,
    step_rk2,
)
from wavecascade.kernel import KernelSpec
from wavecascade.mesh import uniform_grid

from conftest import random_grid


def test_cfl_example():
    grid = uniform_grid(50, 0.5)
    g0 = np.zeros(grid.M)
    g0[3] = 1.26157
    rep = cfl_bound(grid, KernelSpec(2.0), g0)
    assert rep.dt_bound == pytest.approx(0.125 * 0.5 / (50**3 * 1.26157), rel=1e-14)
    assert rep.dt_bound == pytest.approx(3.963e-7, rel=1e-3)
    assert rep.c_gamma == 15 / 16


def test_cfl_linear_in_norm():
    grid = uniform_grid(4, 0.25)
    spec = KernelSpec(1.5)
    g = np.random.default_rng(0).random(grid.M)
    assert cfl_bound(grid, spec, 2 * g).dt_bound == pytest.approx(cfl_bound(grid, spec, g).dt_bound / 2, rel=1e-15)


def test_cfl_zero_state():
    rep = cfl_bound(uniform_grid(1, 0.5), KernelSpec(2), np.zeros(2))
    assert math.isinf(rep.dt_bound) and rep.zero_state


def test_cfl_flags_violation():
    grid = uniform_grid(2, 0.5)
    rep = cfl_bound(grid, KernelSpec(2), np.ones(4), dt=1.0)
    assert not rep.satisfied and rep.dt == 1.0


@pytest.mark.parametrize("stepper", [step_euler, step_rk2])
def test_zero_is_fixed_point(stepper):
    grid = uniform_grid(3, 0.5)
    out = stepper(grid, KernelSpec(2), EnergyState(np.zeros(6)), 0.3)
    assert not np.any(out.g) and out.t == 0.3


def test_euler_three_cell(three_cell):
    grid, spec, g = three_cell
    q = np.array([9.0, 8.0, 4.0, -3.0])
    dt = 0.01
    out = step_euler(grid, spec, EnergyState(g), dt)
    expected = g + dt * grid.pivots / grid.widths * np.diff(q)
    np.testing.assert_allclose(out.g, expected, rtol=0, atol=1e-15)


def test_rk2_is_heun(three_cell):
    grid, spec, g = three_cell
    dt = 0.02
    k1 = collision_rate(grid, spec, g)
    k2 = collision_rate(grid, spec, g + dt * k1)
    out = step_rk2(grid, spec, EnergyState(g), dt)
    np.testing.assert_array_equal(out.g, g + 0.5 * dt * (k1 + k2))
    mid = step_rk2(grid, spec, EnergyState(g), dt, variant="midpoint")
    np.testing.assert_array_equal(mid.g, g + dt * collision_rate(grid, spec, g + 0.5 * dt * k1))


def test_rk2_minus_euler_is_second_order():
    rng = np.random.default_rng(11)
    grid = uniform_grid(4.0, 0.25)
    spec = KernelSpec(2.0)
    state = EnergyState(rng.random(grid.M))
    dts = np.array([1e-3, 1e-4, 1e-5])
    diffs = [np.max(np.abs(step_rk2(grid, spec, state, dt).g - step_euler(grid, spec, state, dt).g)) for dt in dts]
    slope = np.polyfit(np.log(dts), np.log(diffs), 1)[0]
    assert abs(slope - 2.0) < 0.05


def test_mass_transfer_bookkeeping():
    rng = np.random.default_rng(12)
    for _ in range(10):
        grid = random_grid(rng, int(rng.integers(2, 40)))
        spec = KernelSpec(float(rng.uniform(1.0001, 2.0)))
        g = rng.random(grid.M)
        dt = 1e-3
        q = composite_flux_fast(grid, spec, g)
        new = step_euler(grid, spec, EnergyState(g), dt).g
        lhs = np.sum(grid.widths / grid.pivots * (new - g))
        rhs = dt * (q[-1] - q[0])
        assert abs(lhs - rhs) <= 1e-11 * max(abs(rhs), dt * (abs(q[-1]) + abs(q[0])))


def test_positivity_under_bound_small():
    rng = np.random.default_rng(13)
    for _ in range(10):
        grid = uniform_grid(float(rng.integers(1, 9)), 0.25)
        spec = KernelSpec(2.0)
        g = rng.random(grid.M)
        dt = cfl_bound(grid, spec, g).dt_bound
        for _ in range(20):
            new = step_euler(grid, spec, EnergyState(g), dt).g
            assert np.all(new >= 0.0) and new.max() <= g.max()
            g = new


def test_step_rejects_bad_dt():
    grid = uniform_grid(1, 0.5)
    with pytest.raises(ValueError):
        step_euler(grid, KernelSpec(2), EnergyState(np.ones(2)), 0.0)


def test_instability_aborts_with_step():
    grid = uniform_grid(50, 0.5)
    g0 = np.full(grid.M, 1e3)
    cfg = IntegratorConfig("euler", dt=10.0, t_end=1000.0, cfl_mode="off")
    with np.errstate(all="ignore"), pytest.raises(InstabilityError) as info:
        integrate(grid, KernelSpec(2.0), g0, cfg)
    assert info.value.step >= 1
    assert info.value.result is not None and not info.value.result.completed


def test_t_end_zero_keeps_initial_state():
    grid = uniform_grid(5, 0.5)
    g0 = project_ic(InitialCondition("spike"), grid).g
    res = integrate(grid, KernelSpec(2), g0, IntegratorConfig("rk2", 0.1, 0.0, "off"))
    assert res.n_steps == 0 and len(res.snapshots) == 1
    np.testing.assert_array_equal(res.snapshots[0], g0)
    assert res.records[0].t == 0.0


@pytest.mark.parametrize("t_end,dt", [(1.0, 0.1), (1.05, 0.1), (0.3, 0.1), (2.0, 0.3), (1e4, 0.05)])
def test_step_count(t_end, dt):
    assert n_steps_for(t_end, dt) == math.ceil(round(t_end / dt, 9))


def test_step_count_in_run():
    grid = uniform_grid(2, 0.5)
    res = integrate(grid, KernelSpec(2), np.ones(4), IntegratorConfig("euler", 0.3, 1.0, "off"))
    assert res.n_steps == 4 and res.records[-1].t == 1.0


def test_cfl_modes():
    grid = uniform_grid(2, 0.5)
    g0 = np.ones(4)
    spec = KernelSpec(2)
    with pytest.warns(CflWarning):
        integrate(grid, spec, g0, IntegratorConfig("euler", 0.1, 0.1, "warn"))
    res = integrate(grid, spec, g0, IntegratorConfig("euler", 0.1, 0.01, "enforce"))
    assert res.dt_used == res.cfl.dt_bound
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        integrate(grid, spec, g0, IntegratorConfig("euler", 0.1, 0.1, "off"))


def test_snapshots_and_cadence():
    grid = uniform_grid(2, 0.5)
    res = integrate(
        grid, KernelSpec(2), np.ones(4), IntegratorConfig("rk2", 0.01, 0.1, "off"), cadence=3, snapshot_times=(0.05,)
    )
    assert res.snapshot_times == pytest.approx([0.0, 0.05, 0.1])
    assert [r.t for r in res.records] == pytest.approx([0.0, 0.03, 0.06, 0.09, 0.1])
    assert res.snapshot_array().shape == (3, 4)


def test_determinism():
    cfg = preset("test1", R=50, t_end=5.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        a, b = run(cfg), run(cfg)
    np.testing.assert_array_equal(a.snapshot_array(), b.snapshot_array())


def test_test1_runs_finite():
    cfg = preset("test1", R=50, t_end=25.0, cadence=50)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = run(cfg)
    assert res.completed and res.n_steps == 500 and res.dt_used == 0.05
    assert np.all(np.isfinite(res.final))


def test_negativity_is_reported_not_clipped():
    # a lone top cell drains at rate -3.75, so dt = 0.4 overshoots zero
    grid = uniform_grid(4, 0.5)
    g0 = np.zeros(8)
    g0[-1] = 1.0
    res = integrate(grid, KernelSpec(2), g0, IntegratorConfig("euler", 0.4, 0.4, "off"))
    assert res.final[-1] == pytest.approx(1.0 - 0.4 * 3.75, rel=1e-15)
    assert res.negative_steps == 1
    ev = res.negativity[0]
    assert (ev.step, ev.count) == (1, 1) and ev.min_val == res.final[-1]
    assert res.records[-1].neg_count == 1 and res.records[-1].min_val < 0
