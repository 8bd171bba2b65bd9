"""Run configuration: dataclasses with defaults plus a TOML loader.

A config file holds one table per section::

    [character]
    order = 40

    [fock]
    emax = 12

    [inner]
    phis = ["exp:kappa=1,theta=0", "blaschke:0+1i"]

    [scatter]
    elastic = ["exp:kappa=0,theta=0", "exp:kappa=1,theta=0"]
    inelastic = ["blaschke:0+1i"]
    s = "0.1:10:50"

Unknown sections or keys are rejected so typos do not silently fall back to
defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import tomli

from .inner import CATALOG, is_exponential, to_spec

MAX_ORDER = 80
MAX_EMAX = 16


class ConfigError(ValueError):
    pass


def _default_elastic() -> list[str]:
    return [to_spec(phi) for phi in CATALOG.values() if is_exponential(phi)]


def _default_inelastic() -> list[str]:
    return [to_spec(phi) for phi in CATALOG.values() if not is_exponential(phi)]


@dataclass
class CharacterConfig:
    order: int = 40
    partition_order: int = 40

    def validate(self):
        for name in ("order", "partition_order"):
            v = getattr(self, name)
            if not 0 <= v <= MAX_ORDER:
                raise ConfigError(f"character.{name} must be in [0, {MAX_ORDER}], got {v}")


@dataclass
class FockConfig:
    emax: int = 12
    mode_limit2: int = 5
    current_limit: int = 3
    bound_limit: int = 4

    def required_emax(self) -> int:
        """Smallest cutoff whose safe blocks are nonempty for every index range."""
        return max(2 * self.mode_limit2, 4 * self.current_limit, 2 * self.bound_limit,
                   2 * (self.mode_limit2 // 2) + self.mode_limit2)

    def validate(self):
        if not 0 <= self.emax <= MAX_EMAX:
            raise ConfigError(f"fock.emax must be in [0, {MAX_EMAX}], got {self.emax}")
        if min(self.mode_limit2, self.current_limit, self.bound_limit) < 0 or self.mode_limit2 % 2 == 0:
            raise ConfigError("fock limits must be >= 0 and mode_limit2 odd")
        if self.emax < self.required_emax():
            raise ConfigError(
                f"fock.emax={self.emax} is too small for the configured index ranges (needs >= {self.required_emax()})"
            )


@dataclass
class InnerConfig:
    phis: list[str] = field(default_factory=lambda: [to_spec(p) for p in CATALOG.values()])
    grid_points: int = 101
    grid_extent: float = 10.0
    causal_n: int = 2**14
    causal_length: float = 32.0

    def validate(self):
        if self.causal_n < 16 or self.causal_n & (self.causal_n - 1):
            raise ConfigError(f"inner.causal_n must be a power of two >= 16, got {self.causal_n}")


@dataclass
class ScatterConfig:
    elastic: list[str] = field(default_factory=_default_elastic)
    inelastic: list[str] = field(default_factory=_default_inelastic)
    exp_kappas: list[float] = field(default_factory=lambda: [0.0, 1.0, 2.0])
    s: str = "0.1:10:50"
    bound_s: str = "0.01:100:25"
    collapse_lo: float = 0.3
    collapse_hi: float = 3.0
    collapse_n: int = 10
    tol: float = 1e-7
    p_max: float = 20.0
    grid_nodes: int = 64

    def validate(self):
        if not self.tol > 0:
            raise ConfigError("scatter.tol must be > 0")
        parse_range(self.s)
        parse_range(self.bound_s)


@dataclass
class RunConfig:
    character: CharacterConfig = field(default_factory=CharacterConfig)
    fock: FockConfig = field(default_factory=FockConfig)
    inner: InnerConfig = field(default_factory=InnerConfig)
    scatter: ScatterConfig = field(default_factory=ScatterConfig)

    def validate(self) -> RunConfig:
        for f in fields(self):
            getattr(self, f.name).validate()
        return self


def parse_range(text: str) -> tuple[float, float, int]:
    """``a:b:n`` -> (a, b, n) for a log-uniform grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range must look like a:b:n, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"range must look like a:b:n, got {text!r}") from None
    if not (0 < a <= b) or n < 1:
        raise ConfigError(f"range needs 0 < a <= b and n >= 1, got {text!r}")
    return a, b, n


def _section(cls, data: dict, name: str):
    known = {f.name for f in fields(cls)}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown keys in [{name}]: {sorted(extra)}")
    return cls(**data)


def from_dict(data: dict) -> RunConfig:
    if not data:
        raise ConfigError("config is empty")
    sections = {f.name: f.type for f in fields(RunConfig)}
    extra = set(data) - set(sections)
    if extra:
        raise ConfigError(f"unknown config sections: {sorted(extra)}")
    cfg = RunConfig()
    for name in data:
        if not isinstance(data[name], dict):
            raise ConfigError(f"[{name}] must be a table")
        current = getattr(cfg, name)
        cfg = replace(cfg, **{name: _section(type(current), data[name], name)})
    return cfg.validate()


def load_config(path: str | Path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomli.load(fh)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return from_dict(data)
