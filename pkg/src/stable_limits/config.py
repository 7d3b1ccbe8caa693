"""Experiment configuration: flat ``key = value`` files with typed parsing."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError
from .paths import FunctionalF

_REGIME = re.compile(r"^\s*(theorem1|theorem2\(\s*([0-9.eE+-]+)\s*\))\s*$")


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _ints(text):
    out = []
    for v in text.split(","):
        v = v.strip()
        if v:
            x = float(v)
            if x != int(x):
                raise ValueError(f"{v} is not an integer")
            out.append(int(x))
    return tuple(out)


def _bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    alpha: float
    p: float
    n_values: tuple[int, ...]
    replicate_count: int
    f_tag: str = "sine"
    h_shape: str = "taper"
    regime: str = "theorem1"
    epsilon: float | None = None
    eval_times: tuple[float, ...] = (1.0,)
    master_seed: int = 0
    ks_level: float = 0.01
    output_dir: str = "results"
    small_jump_floor: float = 1e-4
    char_paths: int = 100
    center: bool = True
    scaled_indicator: bool = True

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.replicate_count < 1:
            raise ConfigError("replicate_count must be positive")
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise ConfigError("n_values must be a nonempty list of positive integers")
        if not self.eval_times or any(not 0.0 < t <= 1.0 for t in self.eval_times):
            raise ConfigError("eval_times must be nonempty and lie in (0, 1]")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError("p must lie in [0, 1]")
        if self.regime == "theorem1":
            if not 0.0 < self.alpha < 1.0:
                raise ConfigError("theorem1 requires alpha in (0, 1)")
            if not 0.0 < self.small_jump_floor < 0.5:
                raise ConfigError("small_jump_floor must lie in (0, 1/2)")
        elif self.regime == "theorem2":
            if not 1.0 <= self.alpha < 2.0:
                raise ConfigError("theorem2 requires alpha in [1, 2)")
            if self.epsilon is None or not 0.0 < self.epsilon < 0.5:
                raise ConfigError("theorem2 requires epsilon in (0, 1/2)")
        else:
            raise ConfigError(f"unknown regime {self.regime!r}")
        if self.h_shape not in ("taper", "hard"):
            raise ConfigError("h_shape must be taper or hard")
        if self.ks_level not in (0.05, 0.01):
            raise ConfigError("ks_level must be 0.05 or 0.01")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must be an unsigned 64-bit integer")
        if self.char_paths < 0:
            raise ConfigError("char_paths must be nonnegative")
        try:
            FunctionalF.parse(self.f_tag)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def functional(self) -> FunctionalF:
        return FunctionalF.parse(self.f_tag)

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(self, master_seed=seed)

    def to_text(self, include_output: bool = True) -> str:
        lines = []
        for fd in fields(self):
            if fd.name == "output_dir" and not include_output:
                continue
            value = getattr(self, fd.name)
            if fd.name == "regime":
                value = "theorem1" if self.regime == "theorem1" else f"theorem2({self.epsilon!r})"
            elif fd.name == "epsilon":
                continue
            elif isinstance(value, tuple):
                value = ", ".join(repr(v) for v in value)
            elif isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{fd.name} = {value}")
        return "\n".join(lines) + "\n"

    @property
    def experiment_id(self) -> str:
        return hashlib.sha256(self.to_text(include_output=False).encode()).hexdigest()[:12]


_PARSERS = {
    "alpha": float,
    "p": float,
    "n_values": _ints,
    "replicate_count": int,
    "f_tag": str.strip,
    "h_shape": str.strip,
    "eval_times": _floats,
    "master_seed": int,
    "ks_level": float,
    "output_dir": str.strip,
    "small_jump_floor": float,
    "char_paths": int,
    "center": _bool,
    "scaled_indicator": _bool,
}
_REQUIRED = ("alpha", "p", "n_values", "replicate_count", "regime")


def parse_config(text: str) -> ExperimentConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value")
        if key in values or (key == "regime" and "epsilon" in values):
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key == "regime":
            m = _REGIME.match(value)
            if not m:
                raise ConfigError(f"line {lineno}: regime must be theorem1 or theorem2(<eps>)")
            values["regime"] = "theorem2" if m.group(2) else "theorem1"
            if m.group(2):
                values["epsilon"] = float(m.group(2))
            continue
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from exc
    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
