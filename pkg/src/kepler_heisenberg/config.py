"""Run configuration: one flat set of named keys, read from ``key = value`` files.

Every constant the search depends on is a key; the defaults reproduce the reference
settings (0.1 candidate threshold, annulus radii 1e-1 / 1e-12, 1000 iterations,
period cap 200).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

from .integrator import IntegratorConfig
from .optimizer import OptimizerConfig
from .shooting import ShootingConfig

PLOT_KINDS = ("xy", "z", "objective_time", "objective_iterations", "energy", "dilational", "class_signal", "dft")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    # integrator
    delta: float = 1e-3
    omega: float = 0.0  # 0 selects pi / (4 delta)
    record_stride: int = 0  # 0 selects samples 1e-2 apart
    breakdown_tolerance: float = 1e-2
    # shooting
    threshold: float = 0.1
    t_init: float = 10.0
    t_max: float = 400.0
    warmup_fraction: float = 0.01
    escape_radius: float = 1e3
    escape_growth: float = 1.5
    # optimizer
    outer_radius: float = 1e-1
    inner_radius: float = 1e-12
    iterations: int = 1000
    closure_tolerance: float = 1e-3
    # sampling
    branch: int = 1
    search_p_y_min: float = 0.0
    search_p_y_max: float = 1.0
    period_cap: float = 200.0
    plane_p_theta_min: float = 0.0
    plane_p_theta_max: float = 1.0
    plane_J_min: float = -0.25
    plane_J_max: float = 0.25
    plane_n: int = 2500
    line_p_theta_min: float = 0.0
    line_p_theta_max: float = 1.0
    line_n: int = 1000
    line_iterations: int = 200
    # output
    workers: int = 1
    trajectory_stride: int = 1
    plots: str = ",".join(PLOT_KINDS)

    def __post_init__(self):
        try:
            self.integrator()
            self.shooting()
            self.optimizer()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.branch not in (1, -1):
            raise ConfigError("branch must be 1 or -1")
        for key in ("plane_n", "line_n", "workers", "trajectory_stride"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be at least 1")
        if self.line_iterations < 0:
            raise ConfigError("line_iterations must be nonnegative")
        if not self.period_cap > 0:
            raise ConfigError("period_cap must be positive")
        unknown = set(self.plot_kinds) - set(PLOT_KINDS)
        if unknown:
            raise ConfigError(f"unknown plot kinds: {sorted(unknown)}")

    @property
    def plot_kinds(self) -> list[str]:
        return [p.strip() for p in self.plots.split(",") if p.strip()]

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(self.delta, self.omega or None, self.record_stride or None, self.breakdown_tolerance)

    def shooting(self) -> ShootingConfig:
        return ShootingConfig(self.threshold, self.t_init, self.t_max, self.warmup_fraction,
                              self.escape_radius, self.escape_growth)

    def optimizer(self, iterations: int | None = None) -> OptimizerConfig:
        return OptimizerConfig(self.outer_radius, self.inner_radius,
                               self.iterations if iterations is None else iterations,
                               self.seed, self.closure_tolerance, self.warmup_fraction)

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_text(self) -> str:
        return "".join(f"{k} = {_format(v)}\n" for k, v in self.as_dict().items())


def _format(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def parse_value(key: str, raw: str):
    if key not in _TYPES:
        raise ConfigError(f"unknown configuration key {key!r}")
    kind = _TYPES[key]
    raw = raw.strip()
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return raw


def parse_pairs(lines) -> dict:
    out = {}
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        out[key] = parse_value(key, raw)
    return out


def load_config(path: str | Path | None = None, overrides: dict | list[str] | None = None) -> RunConfig:
    values = {}
    if path is not None:
        values.update(parse_pairs(Path(path).read_text().splitlines()))
    if isinstance(overrides, dict):
        values.update({k: parse_value(k, str(v)) for k, v in overrides.items()})
    elif overrides:
        values.update(parse_pairs(overrides))
    return RunConfig(**values)


PRESET_DIR = Path(__file__).parent / "presets"


def preset_path(name: str) -> Path:
    path = PRESET_DIR / f"{name}.cfg"
    if not path.exists():
        known = sorted(p.stem for p in PRESET_DIR.glob("*.cfg"))
        raise ConfigError(f"no preset {name!r}; available: {', '.join(known)}")
    return path
