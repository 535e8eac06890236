"""Run configuration shared by the suite runner and the command line."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path

from .descriptors import from_descriptor
from .omega import RecurrenceParams
from .scramble import SystemParams, default_instance, derive_params


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass
class RunConfig:
    instance: object = "default"
    D: str = "1"
    P: int | None = None
    epsilon: str | None = None
    strict: bool = True
    depths: list = field(default_factory=lambda: [13, 26])
    horizon: int = 100_000
    late_fraction: str = "1/2"
    min_hits: int = 3
    family_size: int = 2
    separation: str = "0.001"
    seed: int = 0
    shift_depth: int = 6
    orbit_depth: int = 2
    out: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        cfg = cls(**data)
        cfg.depths = [int(k) for k in cfg.depths]
        return cfg

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
        return cls.from_dict(data)

    def to_json(self) -> dict:
        return asdict(self)

    def recurrence(self) -> RecurrenceParams:
        try:
            return RecurrenceParams(self.horizon, Fraction(self.late_fraction), self.min_hits)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(str(exc)) from None

    def instance_points(self) -> dict:
        if self.instance == "default":
            return default_instance()
        if isinstance(self.instance, str):
            try:
                data = json.loads(Path(self.instance).read_text(encoding="utf-8"))
            except OSError as exc:
                raise ConfigError(f"cannot read instance {self.instance}: {exc.strerror}") from None
        else:
            data = self.instance
        try:
            return {k: from_descriptor(data[k]) for k in ("t0", "t1", "s", "xi")}
        except KeyError as exc:
            raise ConfigError(f"instance lacks point {exc.args[0]}") from None

    def params(self) -> SystemParams:
        pts = self.instance_points()
        try:
            return derive_params(pts["t0"], pts["t1"], pts["s"], pts["xi"], D=Fraction(self.D), P=self.P,
                                 epsilon=None if self.epsilon is None else Fraction(self.epsilon),
                                 strict=self.strict)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"parameter derivation failed: {exc}") from None

    def validate(self, params: SystemParams) -> None:
        """Depth checks: every depth positive and ``horizon >= 10 * max depth * (N+P)``."""
        if not self.depths or min(self.depths) < 1:
            raise ConfigError("depths must be positive integers")
        need = 10 * max(self.depths) * params.stride
        if self.horizon < need:
            raise ConfigError(f"horizon {self.horizon} is below 10 * max depth * (N+P) = {need}")
        if self.shift_depth < 1 or self.orbit_depth < 1:
            raise ConfigError("enumeration depths must be positive")
