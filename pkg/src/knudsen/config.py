"""Run configuration: dataclasses plus strict JSON loading.

A configuration file is a JSON object whose keys mirror ``RunConfig``
(with numerical parameters nested under ``"numerics"``).  Unknown keys are
rejected so that typos fail loudly instead of silently running defaults.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

from .errors import ConfigError
from .phase import VelocityGrid

__all__ = [
    "NumericsConfig",
    "RunConfig",
    "load_config",
    "config_from_dict",
    "config_to_dict",
    "resolve_scale",
    "velocity_grid",
]

DESK_EPS = (1 / 32, 1 / 64, 1 / 128)
PAPER_EPS = (1 / 32, 1 / 64, 1 / 128, 1 / 256)


@dataclass(frozen=True)
class NumericsConfig:
    """Grid and solver resolutions shared by every experiment."""

    kinetic_h: float = 2e-3
    kinetic_dt: float = 1e-4
    limit_h: float = 5e-3
    limit_dt: float = 1e-3
    v_max: float = 16.0
    velocity_resolution: int = 100
    spectral_order: int = 30
    damping: float = 1.0

    def validate(self) -> None:
        for name in ("kinetic_h", "kinetic_dt", "limit_h", "limit_dt",
                     "v_max", "damping"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.velocity_resolution <= 0 or self.spectral_order <= 0:
            raise ConfigError(
                "velocity_resolution and spectral_order must be positive")


@dataclass(frozen=True)
class RunConfig:
    """One experiment invocation."""

    test: int | str
    eps: tuple = DESK_EPS
    t_end: float = 0.1
    out_dir: str = "runs"
    seed: int = 0
    paper_scale: bool = False
    variant: str | None = None
    reference_state: tuple | None = None
    amplitude: float | None = None
    ramp_base: float = 0.0
    ramp_rate: float = 0.0
    numerics: NumericsConfig = field(default_factory=NumericsConfig)

    def validate(self) -> None:
        if self.test != "custom" and self.test not in range(1, 7):
            raise ConfigError(
                f"test must be 1..6 or 'custom', got {self.test!r}")
        if not self.eps or any(e <= 0 for e in self.eps):
            raise ConfigError("eps values must be positive and nonempty")
        if self.t_end <= 0:
            raise ConfigError("t_end must be positive")
        if self.test == "custom":
            if self.reference_state is None or self.amplitude is None:
                raise ConfigError(
                    "a custom scenario needs reference_state and amplitude")
            if len(self.reference_state) != 3:
                raise ConfigError("reference_state must be (rho, u, T)")
        self.numerics.validate()


PAPER_NUMERICS = {"kinetic_h": 1e-3, "kinetic_dt": 5e-5}


def resolve_scale(config: RunConfig) -> RunConfig:
    """Apply the paper-scale preset: finer kinetic grid, one more eps."""
    if not config.paper_scale:
        return config
    numerics = dataclasses.replace(config.numerics, **PAPER_NUMERICS)
    eps = config.eps
    if tuple(eps) == DESK_EPS:
        eps = PAPER_EPS
    return dataclasses.replace(config, numerics=numerics, eps=eps)


def velocity_grid(numerics: NumericsConfig) -> VelocityGrid:
    """Build the shared velocity grid (resolution = points per unit speed)."""
    half_points = numerics.v_max * numerics.velocity_resolution
    if abs(half_points - round(half_points)) > 1e-9:
        raise ConfigError(
            "v_max * velocity_resolution must be an integer point count")
    return VelocityGrid(v_max=numerics.v_max,
                        half_points=int(round(half_points)))


def _from_mapping(cls, data: dict, context: str):
    allowed = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(
            f"unknown {context} keys: {', '.join(sorted(unknown))}")
    return data


def config_from_dict(data: dict) -> RunConfig:
    """Build a validated RunConfig from a plain mapping."""
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    data = dict(data)
    if "test" not in data:
        raise ConfigError("configuration needs a 'test' entry")
    numerics_data = data.pop("numerics", {})
    if not isinstance(numerics_data, dict):
        raise ConfigError("'numerics' must be a JSON object")
    _from_mapping(NumericsConfig, numerics_data, "numerics")
    numerics = NumericsConfig(**numerics_data)
    _from_mapping(RunConfig, data | {"numerics": None}, "configuration")
    for name in ("eps", "reference_state"):
        if data.get(name) is not None:
            data[name] = tuple(data[name])
    config = RunConfig(numerics=numerics, **data)
    config.validate()
    return config


def config_to_dict(config: RunConfig) -> dict:
    """Plain-JSON form of a config (round-trips through config_from_dict)."""
    data = dataclasses.asdict(config)
    data["eps"] = list(config.eps)
    if config.reference_state is not None:
        data["reference_state"] = list(config.reference_state)
    return data


def load_config(path: str) -> RunConfig:
    """Read and validate a JSON configuration file."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return config_from_dict(data)
