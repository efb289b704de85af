"""Explicit time stepping, the positivity time-step bound, and run driver."""

from __future__ import annotations

import logging
import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import diagnostics
from .collision import EnergyState, collision_rate
from .kernel import KernelSpec
from .mesh import Grid

logger = logging.getLogger(__name__)

METHODS = ("euler", "rk2")
CFL_MODES = ("enforce", "warn", "off")
RK2_VARIANTS = ("heun", "midpoint")


class InstabilityError(FloatingPointError):
    """A step produced non-finite values; carries the partial run."""

    def __init__(self, step: int, t: float, result=None):
        super().__init__(f"non-finite state at step {step} (t={t:g})")
        self.step = step
        self.t = t
        self.result = result


class CflWarning(UserWarning):
    pass


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk2"
    dt: float = 0.05
    t_end: float = 0.0
    cfl_mode: str = "warn"
    rk2_variant: str = "heun"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.cfl_mode not in CFL_MODES:
            raise ValueError(f"cfl_mode must be one of {CFL_MODES}")
        if self.rk2_variant not in RK2_VARIANTS:
            raise ValueError(f"rk2_variant must be one of {RK2_VARIANTS}")
        if not self.dt > 0.0:
            raise ValueError("dt must be positive")
        if not self.t_end >= 0.0:
            raise ValueError("t_end must be nonnegative")


@dataclass(frozen=True)
class CflReport:
    dt_bound: float
    satisfied: bool
    c_gamma: float
    dt: float = math.nan

    @property
    def zero_state(self) -> bool:
        return math.isinf(self.dt_bound)


def cfl_bound(grid: Grid, spec: KernelSpec, g0, dt: float | None = None) -> CflReport:
    """Largest dt with dt * R**(gamma+1) * |g0|_inf <= (gamma/16) * min h.

    An identically zero state has no bound; ``dt_bound`` is then +inf.
    """
    g = np.asarray(getattr(g0, "g", g0), dtype=float)
    norm = float(np.max(np.abs(g))) if g.size else 0.0
    gamma = spec.gamma
    if norm == 0.0:
        bound = math.inf
    else:
        bound = (gamma / 16.0) * grid.h_min / (grid.R ** (gamma + 1.0) * norm)
    c_gamma = (17.0 - gamma) / 16.0
    if dt is None:
        return CflReport(bound, True, c_gamma)
    return CflReport(bound, bool(dt <= bound), c_gamma, float(dt))


def _finite_or_raise(g, step, t):
    if not np.all(np.isfinite(g)):
        raise InstabilityError(step, t)


def step_euler(grid: Grid, spec: KernelSpec, state: EnergyState, dt: float) -> EnergyState:
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    with np.errstate(over="ignore", invalid="ignore"):
        g = state.g + dt * collision_rate(grid, spec, state.g)
    _finite_or_raise(g, -1, state.t + dt)
    return EnergyState(g, state.t + dt)


def step_rk2(grid: Grid, spec: KernelSpec, state: EnergyState, dt: float, variant: str = "heun") -> EnergyState:
    """Heun's method by default; ``variant='midpoint'`` for the midpoint rule."""
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    g = state.g
    with np.errstate(over="ignore", invalid="ignore"):
        r1 = collision_rate(grid, spec, g)
        if variant == "heun":
            r2 = collision_rate(grid, spec, g + dt * r1)
            new = g + 0.5 * dt * (r1 + r2)
        elif variant == "midpoint":
            new = g + dt * collision_rate(grid, spec, g + 0.5 * dt * r1)
        else:
            raise ValueError(f"unknown RK2 variant {variant!r}")
    _finite_or_raise(new, -1, state.t + dt)
    return EnergyState(new, state.t + dt)


@dataclass
class NegativityEvent:
    step: int
    t: float
    count: int
    min_val: float


@dataclass
class RunResult:
    grid: Grid
    spec: KernelSpec
    integrator: IntegratorConfig
    cfl: CflReport
    dt_used: float
    n_steps: int
    snapshot_times: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    records: list = field(default_factory=list)
    negativity: list = field(default_factory=list)
    negative_steps: int = 0
    wall_time: float = 0.0
    completed: bool = False

    @property
    def final(self) -> np.ndarray:
        return self.snapshots[-1]

    def snapshot_array(self) -> np.ndarray:
        return np.vstack(self.snapshots)

    def series(self, name: str) -> np.ndarray:
        """Column of the diagnostic records, e.g. ``'t'``, ``'m0'``, ``'linf'``."""
        return np.array([r.as_row()[name] for r in self.records])


MAX_STORED_EVENTS = 1000


def n_steps_for(t_end: float, dt: float) -> int:
    # tolerate t_end/dt landing a few ulp above an integer
    return int(math.ceil(t_end / dt - 1e-9)) if t_end > 0 else 0


def integrate(
    grid: Grid,
    spec: KernelSpec,
    g0,
    integrator: IntegratorConfig,
    cadence: int = 1,
    snapshot_times=(),
    snapshot_every: float | None = None,
) -> RunResult:
    """Advance ``g0`` from t = 0 to ``integrator.t_end``.

    Diagnostics are recorded every ``cadence`` steps and at the end.
    Snapshots are taken at the step nearest each requested time (and on a
    regular ``snapshot_every`` spacing if given); the initial and final
    states are always kept.
    """
    if cadence < 1:
        raise ValueError("cadence must be >= 1")
    g = np.array(getattr(g0, "g", g0), dtype=float)
    if g.shape != (grid.M,):
        raise ValueError("initial state does not match grid")
    dt = integrator.dt
    report = cfl_bound(grid, spec, g, dt)
    if integrator.cfl_mode == "enforce" and not report.satisfied:
        dt = report.dt_bound
        logger.info("clamping dt to the positivity bound %.6g", dt)
    elif integrator.cfl_mode == "warn" and not report.satisfied:
        warnings.warn(
            f"dt={dt:g} exceeds the positivity bound {report.dt_bound:.4g}",
            CflWarning,
            stacklevel=2,
        )
    t_end = integrator.t_end
    n_steps = n_steps_for(t_end, dt)

    wanted = set()
    for ts in snapshot_times:
        if 0.0 <= ts <= t_end:
            wanted.add(min(n_steps, int(round(ts / dt))))
    if snapshot_every:
        n_every = max(1, int(round(snapshot_every / dt)))
        wanted.update(range(0, n_steps + 1, n_every))
    wanted.update((0, n_steps))

    result = RunResult(grid, spec, integrator, report, dt, n_steps)
    start = time.perf_counter()

    def observe(step, t, values):
        if step in wanted:
            result.snapshot_times.append(t)
            result.snapshots.append(values.copy())
        if step % cadence == 0 or step == n_steps:
            result.records.append(diagnostics.record(grid, values, t))
        neg = values < 0.0
        if step > 0 and neg.any():
            result.negative_steps += 1
            if len(result.negativity) < MAX_STORED_EVENTS:
                result.negativity.append(NegativityEvent(step, t, int(neg.sum()), float(values.min())))

    observe(0, 0.0, g)
    state = EnergyState(g, 0.0)
    for n in range(1, n_steps + 1):
        t_next = min(n * dt, t_end)
        h_step = t_next - state.t
        try:
            if integrator.method == "euler":
                state = step_euler(grid, spec, state, h_step)
            else:
                state = step_rk2(grid, spec, state, h_step, integrator.rk2_variant)
        except InstabilityError as exc:
            result.wall_time = time.perf_counter() - start
            raise InstabilityError(n, t_next, result) from exc
        state.t = t_next
        observe(n, t_next, state.g)
    result.wall_time = time.perf_counter() - start
    result.completed = True
    return result


def run(config) -> RunResult:
    """Run a :class:`~wavecascade.config.SimulationConfig`."""
    grid = config.grid()
    spec = config.kernel()
    g0 = config.initial_state(grid)
    return integrate(
        grid,
        spec,
        g0,
        config.integrator(),
        cadence=config.cadence,
        snapshot_times=config.snapshots,
        snapshot_every=config.snapshot_every,
    )
