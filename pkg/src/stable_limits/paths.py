"""Pre-limit partial-sum processes S_n and Y_n as cadlag step paths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .heavy_tail import ScalingConstants, TailLaw, TruncationFn, truncated_centering


@dataclass(frozen=True)
class StepPath:
    """Right-continuous path ``initial_value + sum of jumps up to t + drift * t``.

    ``values[k]`` is the step level (without the drift term) on
    ``[times[k], times[k+1])``. Pre-limit paths have ``drift == 0``.
    """

    times: np.ndarray
    values: np.ndarray
    initial_value: float = 0.0
    drift: float = 0.0

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if times.size and (times[0] <= 0.0 or np.any(np.diff(times) <= 0.0)):
            raise ValueError("times must be strictly increasing and positive")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def _level(self, t, side):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.times, t, side=side) - 1
        levels = np.concatenate(([self.initial_value], self.values))
        return levels[idx + 1]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = self._level(t, "right") + self.drift * t
        return float(out) if out.ndim == 0 else out

    def left_limit(self, t):
        t = np.asarray(t, dtype=float)
        out = self._level(t, "left") + self.drift * t
        return float(out) if out.ndim == 0 else out

    @property
    def jumps(self) -> np.ndarray:
        return np.diff(np.concatenate(([self.initial_value], self.values)))

    def __len__(self):
        return self.times.size


# ---------------------------------------------------------------------------
# integrand registry


def _holder_sup(fn, a, rng, pairs):
    x = rng.uniform(-50.0, 50.0, pairs)
    # half the pairs close together so small increments are probed
    y = np.where(np.arange(pairs) % 2 == 0, rng.uniform(-50.0, 50.0, pairs), x + rng.normal(0, 1e-2, pairs))
    d = np.abs(x - y)
    ok = d > 0
    return float(np.max(np.abs(fn(x[ok]) - fn(y[ok])) / d[ok] ** a))


@dataclass(frozen=True)
class FunctionalF:
    """Bounded Holder integrand from a closed registry.

    tags: ``constant`` (param c), ``sine``, ``cosine``, ``clamped_identity``
    (param C), ``reciprocal_quadratic`` (1 / (1 + x^2)).
    """

    tag: str
    param: float | None = None
    holder_K: float = field(init=False)
    holder_a: float = field(init=False, default=1.0)
    bound: float = field(init=False)

    def __post_init__(self):
        tag, c = self.tag, self.param
        if tag == "constant":
            if c is None:
                raise ValueError("constant needs a value")
            K, bound = 1.0, abs(c)
        elif tag in ("sine", "cosine"):
            K, bound = 1.0, 1.0
        elif tag == "clamped_identity":
            if c is None or c <= 0:
                raise ValueError("clamped_identity needs a positive clamp C")
            K, bound = 1.0, c
        elif tag == "reciprocal_quadratic":
            K, bound = 3.0 * math.sqrt(3.0) / 8.0 + 1e-12, 1.0
        else:
            raise ValueError(f"unknown functional tag {tag!r}")
        object.__setattr__(self, "holder_K", K)
        object.__setattr__(self, "bound", bound)
        if holder_certificate(tag, c) > K:
            raise ValueError(f"{tag} violates its Holder certificate")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        tag = self.tag
        if tag == "constant":
            out = np.full_like(x, self.param)
        elif tag == "sine":
            out = np.sin(x)
        elif tag == "cosine":
            out = np.cos(x)
        elif tag == "clamped_identity":
            out = np.clip(x, -self.param, self.param)
        else:
            out = 1.0 / (1.0 + x * x)
        return float(out) if out.ndim == 0 else out

    @classmethod
    def parse(cls, text: str) -> "FunctionalF":
        """``sine``, ``constant:1.5``, ``clamped_identity:2`` ..."""
        tag, _, arg = text.partition(":")
        return cls(tag.strip(), float(arg) if arg else None)

    def __str__(self):
        return self.tag if self.param is None else f"{self.tag}:{self.param:g}"


@lru_cache(maxsize=None)
def holder_certificate(tag: str, param: float | None, pairs: int = 10**6) -> float:
    """Largest observed ``|f(x) - f(y)| / |x - y|`` over random pairs (a = 1)."""
    rng = np.random.default_rng(20240611)
    fns: dict[str, Callable] = {
        "constant": lambda x: np.zeros_like(x),
        "sine": np.sin,
        "cosine": np.cos,
        "clamped_identity": lambda x: np.clip(x, -param, param),
        "reciprocal_quadratic": lambda x: 1.0 / (1.0 + x * x),
    }
    return _holder_sup(fns[tag], 1.0, rng, pairs)


# ---------------------------------------------------------------------------
# path construction


def _step_times(n: int) -> np.ndarray:
    return np.arange(1, n + 1) / n


def functional_increments(x: np.ndarray, f: Callable) -> tuple[np.ndarray, np.ndarray]:
    """Partial sums ``s_i`` and Y-increments ``f(s_{i-1}) x_i`` for i = 2..n."""
    s = np.cumsum(x)
    return s, f(s[:-1]) * x[1:]


def _assemble(x, f):
    n = x.size
    times = _step_times(n)
    s, dy = functional_increments(x, f)
    S = StepPath(times, s)
    Y = StepPath(times[1:], np.cumsum(dy))
    return S, Y


def build_functional_paths(samples, sc: ScalingConstants, f: Callable, center: bool = True):
    """Return ``(S_n, Y_n)`` from raw draws.

    ``X_{n,i} = samples[i] / b_n - c_n``; ``S_n`` jumps by ``X_{n,i}`` at
    ``i/n`` and ``Y_n`` by ``f(S_n((i-1)/n)) X_{n,i}`` for ``i >= 2``.
    ``center=False`` drops ``c_n``.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (sc.n,):
        raise ValueError(f"expected {sc.n} samples, got shape {samples.shape}")
    x = samples / sc.b_n - (sc.c_n if center else 0.0)
    return _assemble(x, f)


def truncated_increments(samples, law: TailLaw, sc: ScalingConstants, h: TruncationFn, eps: float, scaled_indicator: bool = True):
    if not 0.0 < eps < h.inner_radius:
        raise ValueError(f"eps must lie in (0, {h.inner_radius})")
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (sc.n,):
        raise ValueError(f"expected {sc.n} samples, got shape {samples.shape}")
    y = samples / sc.b_n
    keep = np.abs(y) >= eps if scaled_indicator else np.abs(samples) >= eps
    c_eps = truncated_centering(law, sc.n, h, eps, scaled=scaled_indicator)
    return np.where(keep, y, 0.0) - c_eps


def build_truncated_paths(
    samples,
    law: TailLaw,
    sc: ScalingConstants,
    f: Callable,
    h: TruncationFn,
    eps: float,
    scaled_indicator: bool = True,
):
    """Paths built from ``X^eps_{n,j} = Y_j 1{|Y_j| >= eps} - E h(Y 1{|Y| >= eps})``, ``Y = X/b_n``.

    With ``scaled_indicator=False`` the indicator tests the raw draw ``|X_j| >= eps``.
    """
    return _assemble(truncated_increments(samples, law, sc, h, eps, scaled_indicator), f)
