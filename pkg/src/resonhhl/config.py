"""Run configuration: a flat ``key = value`` text file.

Every key has a default, so an empty file is a valid configuration.  Keys
are dotted (``basis.size``); unknown keys are rejected to catch typos.
Lines starting with ``#`` or ``;`` are comments.
"""

from __future__ import annotations

import configparser
import dataclasses
import os
from dataclasses import dataclass, field
from pathlib import Path

from .ec import REFERENCE_RESONANCE, training_lambdas
from .ihhl import SOLVERS, UPDATE_RULES
from .physics_alpha import (
    ChannelSpec,
    PotentialParams,
    RadialBasis,
    ScalingAngle,
    default_coulomb_strength,
    default_hbar2_over_2mu,
)
from .qsim.hhl import HhlConfig

__all__ = ["CONFIG_ENV", "KEYS", "ConfigError", "PhysicsConfigError", "RunConfig", "load_config", "dump_config"]

CONFIG_ENV = "RESONHHL_CONFIG"


class ConfigError(ValueError):
    """Malformed configuration: unknown key, unparsable value, bad option."""


class PhysicsConfigError(ConfigError):
    """Well-formed configuration describing an invalid physical setup."""


@dataclass(frozen=True)
class RunConfig:
    V0: float = -122.6225
    a: float = 2.132
    L: int = 4
    hbar2_over_2mu: float = field(default_factory=default_hbar2_over_2mu)
    coulomb_strength: float = field(default_factory=default_coulomb_strength)
    basis_size: int = 30
    b0: float = 0.3
    ratio: float = 1.35
    lambda_min: float = 1.45
    lambda_max: float = 1.75
    count: int = 8
    target_lambda: float = 1.0
    theta_deg: float = 20.0
    reference_re: float = REFERENCE_RESONANCE.real
    reference_im: float = REFERENCE_RESONANCE.imag
    epsilon: float = 1e-4
    beta: float = 1.0
    max_iter: int = 100
    solver: str = "classical"
    update: str = "auto"
    clock_qubits: int = 10
    seed: int = 0

    def __post_init__(self):
        try:
            self.potential()
            self.channel()
            self.basis()
            self.angle()
        except ValueError as exc:
            raise PhysicsConfigError(str(exc)) from exc
        if self.count < 1:
            raise ConfigError("training.count must be >= 1")
        if self.lambda_max < self.lambda_min:
            raise ConfigError("training.lambda_max must not be below training.lambda_min")
        if not self.epsilon > 0:
            raise ConfigError("ihhl.epsilon must be positive")
        if self.beta == 0:
            raise ConfigError("ihhl.beta must be nonzero")
        if self.max_iter < 1:
            raise ConfigError("ihhl.max_iter must be >= 1")
        if self.solver not in SOLVERS:
            raise ConfigError(f"ihhl.solver must be one of {SOLVERS}")
        if self.update not in UPDATE_RULES + ("auto",):
            raise ConfigError(f"ihhl.update must be one of {UPDATE_RULES + ('auto',)}")
        if self.clock_qubits < 1:
            raise ConfigError("ihhl.clock_qubits must be >= 1")

    def potential(self) -> PotentialParams:
        return PotentialParams(self.V0, self.a, self.target_lambda)

    def channel(self) -> ChannelSpec:
        return ChannelSpec(self.L, self.hbar2_over_2mu, self.coulomb_strength)

    def basis(self) -> RadialBasis:
        return RadialBasis(self.basis_size, self.b0, self.ratio)

    def angle(self) -> ScalingAngle:
        return ScalingAngle.from_degrees(self.theta_deg)

    def lambdas(self):
        return training_lambdas(self.lambda_min, self.lambda_max, self.count)

    @property
    def reference(self) -> complex:
        return complex(self.reference_re, self.reference_im)

    def update_rule(self):
        return None if self.update == "auto" else self.update

    def hhl(self) -> HhlConfig:
        return HhlConfig(clock_qubits=self.clock_qubits, seed=self.seed)


# file key -> dataclass attribute
KEYS = {
    "potential.V0": "V0",
    "potential.a": "a",
    "channel.L": "L",
    "channel.hbar2_over_2mu": "hbar2_over_2mu",
    "channel.coulomb_strength": "coulomb_strength",
    "basis.size": "basis_size",
    "basis.b0": "b0",
    "basis.ratio": "ratio",
    "training.lambda_min": "lambda_min",
    "training.lambda_max": "lambda_max",
    "training.count": "count",
    "target.lambda": "target_lambda",
    "target.theta_deg": "theta_deg",
    "target.reference_re": "reference_re",
    "target.reference_im": "reference_im",
    "ihhl.epsilon": "epsilon",
    "ihhl.beta": "beta",
    "ihhl.max_iter": "max_iter",
    "ihhl.solver": "solver",
    "ihhl.update": "update",
    "ihhl.clock_qubits": "clock_qubits",
    "ihhl.seed": "seed",
}

_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}


def _convert(attr: str, raw: str):
    kind = _TYPES[attr]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value {raw!r} for {attr}: {exc}") from exc
    return raw.strip()


def parse_config(text: str, **overrides) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    parser.optionxform = str  # keys are case sensitive (V0)
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse configuration: {exc}") from exc
    values = {}
    for key, raw in parser["run"].items():
        if key not in KEYS:
            raise ConfigError(f"unknown configuration key {key!r}")
        attr = KEYS[key]
        values[attr] = _convert(attr, raw)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


def load_config(path: str | Path | None = None, **overrides) -> RunConfig:
    """Read ``path`` (or ``$RESONHHL_CONFIG``); no file means all defaults."""
    path = path or os.environ.get(CONFIG_ENV)
    text = Path(path).read_text() if path else ""
    return parse_config(text, **overrides)


def dump_config(cfg: RunConfig) -> str:
    lines = [f"{key} = {getattr(cfg, attr)!r}".replace("'", "") for key, attr in KEYS.items()]
    return "\n".join(lines) + "\n"
