"""Initial energy profiles and the named free-decay experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .collision import EnergyState
from .mesh import Grid

TWO_PI = 2.0 * math.pi
SPIKE_AMPLITUDE = 1.26157

KINDS = ("spike", "gauss", "square", "saw", "custom", "constant")


@dataclass(frozen=True)
class InitialCondition:
    """Initial energy profile g0(k).

    ``params`` by kind:
      square: ``skip_list`` (bool) keeps only n in {0, 1, 3, 5, ...};
      custom: ``table`` ((k, g) pairs, linear interpolation);
      constant: ``value``.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown initial condition {self.kind!r}")
        if self.kind == "custom":
            table = np.asarray(self.params.get("table", ()), dtype=float)
            if table.ndim != 2 or table.shape[1] != 2 or table.shape[0] < 2:
                raise ValueError("custom table needs at least two (k, g) rows")
            if np.any(np.diff(table[:, 0]) <= 0.0):
                raise ValueError("custom table abscissae must increase")
            if np.any(table[:, 1] < 0.0):
                raise ValueError("custom table values must be nonnegative")

    def __call__(self, k):
        return ic_eval(self, k)


def _square(k, skip_list):
    n = np.floor(k / TWO_PI)
    r = k - n * TWO_PI
    on = r <= math.pi
    if skip_list:
        # the listed pattern n = 0, 1, 3, 5, ... drops n = 2, 4, 6, ...
        on &= ~((n >= 2) & (n % 2 == 0))
    return on.astype(float)


def ic_eval(ic: InitialCondition, k):
    """Evaluate g0 at frequencies ``k`` (scalar or array), k >= 0."""
    arr = np.asarray(k, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("initial condition is defined for k >= 0 only")
    kind = ic.kind
    if kind == "spike":
        out = SPIKE_AMPLITUDE * np.exp(-50.0 * (arr - 1.5) ** 2)
    elif kind == "gauss":
        out = (5.0 * math.pi) ** -0.5 * np.exp(-((arr - 50.0 / 3.0) ** 2) / 2.5)
    elif kind == "square":
        out = _square(arr, bool(ic.params.get("skip_list", False)))
    elif kind == "saw":
        out = (arr - np.floor(arr / TWO_PI) * TWO_PI) / TWO_PI
    elif kind == "constant":
        out = np.full_like(arr, float(ic.params.get("value", 1.0)))
    else:
        table = np.asarray(ic.params["table"], dtype=float)
        out = np.interp(arr, table[:, 0], table[:, 1])
    return float(out) if np.ndim(out) == 0 else out


def project_ic(ic: InitialCondition, grid: Grid) -> EnergyState:
    """Cell values g0(k_i) at the pivots (midpoint rule)."""
    return EnergyState(np.asarray(ic_eval(ic, grid.pivots), dtype=float), 0.0)


# (h, dt, T) per test and truncation; the square/saw tests tighten dt at R = 80.
_TESTS = {
    "test1": dict(ic="spike", h=0.5, T=10000.0, dt={50: 0.05, 100: 0.05, 200: 0.05}, R=(50, 100, 200)),
    "test2": dict(ic="gauss", h=0.5, T=10000.0, dt={50: 0.005, 100: 0.005, 200: 0.005}, R=(50, 100, 200)),
    "test3": dict(ic="square", h=0.1, T=100.0, dt={25: 0.0004, 50: 0.0004, 80: 0.00025}, R=(25, 50, 80)),
    "test4": dict(ic="saw", h=0.1, T=100.0, dt={25: 0.0004, 50: 0.0004, 80: 0.00025}, R=(25, 50, 80)),
}
GAMMAS = (1.5, 1.8, 2.0)
PRESET_NAMES = tuple(_TESTS)


def preset_table() -> list[dict]:
    """One row per tested (preset, R) combination."""
    rows = []
    for name, spec in _TESTS.items():
        for R in spec["R"]:
            rows.append(
                dict(name=name, ic=spec["ic"], R=float(R), h=spec["h"], dt=spec["dt"][R], T=spec["T"], gammas=GAMMAS)
            )
    return rows


def preset(name: str, R: float | None = None, gamma: float = 2.0, **overrides):
    """SimulationConfig for one of test1..test4 with its reference parameters.

    ``R`` defaults to 100 for tests 1-2 and 50 for tests 3-4. Keyword
    overrides replace individual config fields (e.g. ``t_end`` for a
    shortened run).
    """
    from .config import SimulationConfig

    if name not in _TESTS:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(_TESTS)}")
    spec = _TESTS[name]
    if R is None:
        R = 100 if name in ("test1", "test2") else 50
    if int(R) != R or int(R) not in spec["R"]:
        raise ValueError(f"{name} was run with R in {spec['R']}, not {R}")
    if not any(abs(gamma - g) < 1e-12 for g in GAMMAS):
        raise ValueError(f"{name} was run with gamma in {GAMMAS}, not {gamma}")
    fields = dict(
        R=float(R),
        h=spec["h"],
        gamma=float(gamma),
        ic=spec["ic"],
        dt=spec["dt"][int(R)],
        t_end=spec["T"],
        method="rk2",
        label=f"{name}_R{int(R)}_g{gamma:g}",
        preset=name,
    )
    fields.update(overrides)
    return SimulationConfig(**fields)
