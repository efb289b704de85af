"""Finite-volume solver for the isotropic 3-wave kinetic equation in energy form."""

from .cases import InitialCondition, ic_eval, preset, project_ic
from .collision import (
    EnergyState,
    collision_rate,
    composite_flux,
    composite_flux_fast,
    direct_collision_oracle,
    flux_Q1,
    flux_Q2,
    smoluchowski_flux,
)
from .config import ConfigError, SimulationConfig, parse_config, render_config
from .diagnostics import (
    DiagnosticRecord,
    EOCError,
    decay_slope,
    eoc_fine_grid,
    eoc_three_grid,
    interpolate_monotone_cubic,
    l1_diff,
    moment,
    spectrum_slope,
)
from .integrate import (
    CflReport,
    InstabilityError,
    IntegratorConfig,
    RunResult,
    cfl_bound,
    integrate,
    run,
    step_euler,
    step_rk2,
)
from .kernel import K_indicator, KernelSpec, RegimeWarning, kernel_eval, weight
from .mesh import Grid, custom_grid, uniform_grid

__version__ = "0.1.0"

__all__ = [
    "CflReport",
    "ConfigError",
    "DiagnosticRecord",
    "EOCError",
    "EnergyState",
    "Grid",
    "InitialCondition",
    "InstabilityError",
    "IntegratorConfig",
    "K_indicator",
    "KernelSpec",
    "RegimeWarning",
    "RunResult",
    "SimulationConfig",
    "cfl_bound",
    "collision_rate",
    "composite_flux",
    "composite_flux_fast",
    "custom_grid",
    "decay_slope",
    "direct_collision_oracle",
    "eoc_fine_grid",
    "eoc_three_grid",
    "flux_Q1",
    "flux_Q2",
    "ic_eval",
    "integrate",
    "interpolate_monotone_cubic",
    "kernel_eval",
    "l1_diff",
    "moment",
    "parse_config",
    "preset",
    "project_ic",
    "render_config",
    "run",
    "smoluchowski_flux",
    "spectrum_slope",
    "step_euler",
    "step_rk2",
    "uniform_grid",
    "weight",
]
