"""Run configuration and its flat ``section.key = value`` text format.

Example::

    preset = test1
    label = spike_R50

    [grid]
    R = 50
    h = 0.5

    [kernel]
    gamma = 2

    [time]
    T = 2000

Keys may be given either under a ``[section]`` header or dotted at top
level (``grid.R = 50``). A ``preset`` fills every field with the values of
that experiment; explicit keys override it. Unknown keys are rejected.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass

from .cases import KINDS, PRESET_NAMES, InitialCondition, project_ic
from .integrate import CFL_MODES, METHODS, RK2_VARIANTS, IntegratorConfig
from .kernel import KernelSpec
from .mesh import Grid, custom_grid, uniform_grid


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimulationConfig:
    R: float | None = None
    h: float | None = None
    edges: tuple | None = None
    gamma: float = 2.0
    ic: str = "spike"
    ic_table: tuple | None = None
    ic_skip_list: bool = False
    dt: float = 0.05
    t_end: float = 0.0
    method: str = "rk2"
    rk2_variant: str = "heun"
    cfl: str = "warn"
    cadence: int = 1
    snapshots: tuple = ()
    snapshot_every: float | None = None
    out_dir: str = "out"
    label: str = "run"
    preset: str | None = None

    def __post_init__(self):
        if self.edges is not None:
            object.__setattr__(self, "edges", tuple(float(e) for e in self.edges))
        elif self.R is None or self.h is None:
            raise ConfigError("grid needs R and h, or explicit edges")
        if self.ic_table is not None:
            object.__setattr__(self, "ic_table", tuple((float(a), float(b)) for a, b in self.ic_table))
        object.__setattr__(self, "snapshots", tuple(float(t) for t in self.snapshots))
        if self.ic not in KINDS:
            raise ConfigError(f"unknown initial condition {self.ic!r}")
        if self.ic == "custom" and self.ic_table is None:
            raise ConfigError("custom initial condition needs ic.table")
        if self.method not in METHODS:
            raise ConfigError(f"time.method must be one of {METHODS}")
        if self.cfl not in CFL_MODES:
            raise ConfigError(f"time.cfl must be one of {CFL_MODES}")
        if self.rk2_variant not in RK2_VARIANTS:
            raise ConfigError(f"time.rk2 must be one of {RK2_VARIANTS}")
        if not (isinstance(self.cadence, int) and self.cadence >= 1):
            raise ConfigError("out.cadence must be an integer >= 1")
        if not self.dt > 0.0:
            raise ConfigError("time.dt must be positive")
        if not self.t_end >= 0.0:
            raise ConfigError("time.T must be nonnegative")
        if self.preset is not None and self.preset not in PRESET_NAMES:
            raise ConfigError(f"unknown preset {self.preset!r}")
        try:
            self.grid()
        except ValueError as exc:
            raise ConfigError(f"bad grid: {exc}") from None

    def grid(self) -> Grid:
        if self.edges is not None:
            return custom_grid(self.edges)
        return uniform_grid(self.R, self.h)

    def kernel(self) -> KernelSpec:
        return KernelSpec(self.gamma)

    def initial_condition(self) -> InitialCondition:
        if self.ic == "custom":
            return InitialCondition("custom", {"table": self.ic_table})
        if self.ic == "square":
            return InitialCondition("square", {"skip_list": self.ic_skip_list})
        return InitialCondition(self.ic)

    def initial_state(self, grid: Grid | None = None):
        return project_ic(self.initial_condition(), grid or self.grid())

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(self.method, self.dt, self.t_end, self.cfl, self.rk2_variant)

    def replace(self, **changes) -> SimulationConfig:
        return dataclasses.replace(self, **changes)


def _floats(text):
    return tuple(float(x) for x in text.replace(",", " ").split())


def _table(text):
    rows = []
    for item in text.replace(";", ",").split(","):
        item = item.strip()
        if not item:
            continue
        k, _, g = item.partition(":")
        rows.append((float(k), float(g)))
    return tuple(rows)


def _bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int(text):
    value = float(text)
    if value != int(value):
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


# key -> (field, parser, renderer)
_KEYS = {
    "preset": ("preset", str, str),
    "label": ("label", str, str),
    "grid.R": ("R", float, repr),
    "grid.h": ("h", float, repr),
    "grid.edges": ("edges", _floats, lambda v: ", ".join(repr(x) for x in v)),
    "kernel.gamma": ("gamma", float, repr),
    "ic.preset": ("ic", str, str),
    "ic.table": ("ic_table", _table, lambda v: ", ".join(f"{a!r}:{b!r}" for a, b in v)),
    "ic.skip_list": ("ic_skip_list", _bool, lambda v: "true" if v else "false"),
    "time.dt": ("dt", float, repr),
    "time.T": ("t_end", float, repr),
    "time.method": ("method", str, str),
    "time.rk2": ("rk2_variant", str, str),
    "time.cfl": ("cfl", str, str),
    "out.cadence": ("cadence", _int, str),
    "out.snapshots": ("snapshots", _floats, lambda v: ", ".join(repr(x) for x in v)),
    "out.snapshot_every": ("snapshot_every", float, repr),
    "out.dir": ("out_dir", str, str),
}

_IC_ALIASES = {"test1": "spike", "test2": "gauss", "test3": "square", "test4": "saw"}


def _read_pairs(text: str) -> dict:
    parser = configparser.ConfigParser(
        interpolation=None, strict=True, default_section="\x00unused", inline_comment_prefixes=("#", ";")
    )
    parser.optionxform = str
    try:
        parser.read_string("[\x00top]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    pairs = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            full = key if section == "\x00top" else f"{section}.{key}"
            if full in pairs:
                raise ConfigError(f"duplicate key {full!r}")
            pairs[full] = value
    return pairs


def parse_config(text: str) -> SimulationConfig:
    """Parse configuration text; unknown keys and bad values raise ConfigError."""
    from .cases import preset as make_preset

    pairs = _read_pairs(text)
    values = {}
    for key, raw in pairs.items():
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}")
        name, conv, _ = _KEYS[key]
        try:
            values[name] = conv(raw.strip())
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from None
    if "ic" in values:
        values["ic"] = _IC_ALIASES.get(values["ic"], values["ic"])
    name = values.get("preset")
    try:
        if name is not None:
            if name not in PRESET_NAMES:
                raise ConfigError(f"unknown preset {name!r}")
            base = make_preset(name, R=values.get("R"), gamma=values.get("gamma", 2.0))
            return base.replace(**values)
        return SimulationConfig(**values)
    except ConfigError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(str(exc)) from None


def render_config(config: SimulationConfig) -> str:
    """Inverse of :func:`parse_config` (every non-default field written out)."""
    sections: dict[str, list[str]] = {}
    top = []
    for key, (name, _, render) in _KEYS.items():
        value = getattr(config, name)
        if value is None:
            continue
        if key == "out.snapshots" and not value:
            continue
        section, _, short = key.rpartition(".")
        line = f"{short} = {render(value)}"
        if section:
            sections.setdefault(section, []).append(line)
        else:
            top.append(line)
    lines = top[:]
    for section, body in sections.items():
        lines.append("")
        lines.append(f"[{section}]")
        lines.extend(body)
    return "\n".join(lines) + "\n"
