"""Limit side: the alpha-stable Levy process, its eps-truncation, the
stochastic integral against it, and the limit characteristics."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .heavy_tail import LevyMeasure, TruncationFn, g_a_piecewise, rho_expectation
from .paths import StepPath
from .tables import limit_table, table_bound


@dataclass(frozen=True)
class JumpRecord:
    time: float
    size: float


def jump_records(path: StepPath) -> list[JumpRecord]:
    return [JumpRecord(float(t), float(j)) for t, j in zip(path.times, path.jumps)]


@dataclass(frozen=True)
class LimitPathConfig:
    """``direct`` keeps jumps above ``floor`` (alpha < 1); ``truncated`` simulates
    the eps-truncated process exactly (alpha in [1, 2))."""

    regime: str
    floor: float
    horizon: float = 1.0

    def __post_init__(self):
        if self.regime not in ("direct", "truncated"):
            raise ValueError(f"unknown regime {self.regime!r}")
        if not 0.0 < self.floor < 0.5:
            raise ValueError("jump floor must lie in (0, r0) = (0, 1/2)")
        if self.horizon != 1.0:
            raise ValueError("horizon is fixed at T = 1")

    @classmethod
    def direct(cls, delta: float = 1e-4) -> "LimitPathConfig":
        return cls("direct", delta)

    @classmethod
    def truncated(cls, eps: float) -> "LimitPathConfig":
        return cls("truncated", eps)

    def check_alpha(self, alpha: float):
        if self.regime == "direct" and not alpha < 1.0:
            raise ValueError("direct regime requires alpha < 1")
        if self.regime == "truncated" and not 1.0 <= alpha < 2.0:
            raise ValueError("truncated regime requires alpha in [1, 2)")


@lru_cache(maxsize=256)
def _drift(alpha, p, floor, shape):
    return rho_expectation(LevyMeasure(alpha, p), TruncationFn(shape).as_piecewise(), floor)


def drift_constant(measure: LevyMeasure, floor: float, h: TruncationFn) -> float:
    """``int_{|x| > floor} h d rho``, the compensator of the retained jumps."""
    return _drift(measure.alpha, measure.p, floor, h.shape)


def small_jump_variance(measure: LevyMeasure, delta: float) -> float:
    """Variance at t = 1 of the dropped compensated jumps below ``delta``."""
    a = measure.alpha
    return a / (2.0 - a) * delta ** (2.0 - a)


def simulate_jumps(measure: LevyMeasure, floor: float, rng: np.random.Generator, horizon: float = 1.0):
    """Poisson jumps of ``rho`` restricted to ``|x| > floor`` on ``(0, horizon]``, time-sorted."""
    count = rng.poisson(horizon * floor ** (-measure.alpha))
    times = np.sort(horizon * (1.0 - rng.random(count)))
    sizes = floor * (1.0 - rng.random(count)) ** (-1.0 / measure.alpha)
    sizes = np.where(rng.random(count) < measure.p, sizes, -sizes)
    if count > 1 and np.any(np.diff(times) == 0.0):
        times, start = np.unique(times, return_index=True)
        sizes = np.add.reduceat(sizes, start)
    return times, sizes


def simulate_levy_path(measure: LevyMeasure, cfg: LimitPathConfig, h: TruncationFn, rng: np.random.Generator) -> StepPath:
    """Sum of retained jumps minus ``t * int_{|x|>floor} h d rho``.

    In the direct regime the compensated jumps below ``floor`` are dropped
    (mean 0, variance ``small_jump_variance``). In the truncated regime the
    result is exact in law because ``x - h(x)`` vanishes below ``floor < 1/2``.
    """
    cfg.check_alpha(measure.alpha)
    times, sizes = simulate_jumps(measure, cfg.floor, rng, cfg.horizon)
    return StepPath(times, np.cumsum(sizes), 0.0, -drift_constant(measure, cfg.floor, h))


def euler_stochastic_integral(path: StepPath, f: Callable, extra_times=(), max_step: float | None = None) -> StepPath:
    """Left-point integral ``int_0^t f(Z(s-)) dZ(s)`` of a jump path with linear drift.

    Each jump contributes ``f(Z(tau-)) * dZ(tau)``. The drift over an
    inter-node interval contributes ``f(Z(start)) * drift * length`` at the
    interval's right end; with nonzero drift the node set also contains 1 and
    ``extra_times`` so the drift is accounted for up to those times.
    ``max_step`` adds the grid ``k / K``, ``K = ceil(1 / max_step)``, so no
    drift step is longer than ``max_step``.
    """
    nodes = path.times
    if path.drift != 0.0:
        extra = np.asarray(extra_times, dtype=float)
        extra = extra[(extra > 0) & (extra <= 1.0)]
        if max_step:
            K = int(np.ceil(1.0 / max_step - 1e-9))
            extra = np.concatenate((extra, np.arange(1, K) / K))
        nodes = np.union1d(nodes, np.concatenate((extra, [1.0])))
    if nodes.size == 0:
        return StepPath(nodes, nodes.copy())
    prev = np.concatenate(([0.0], nodes[:-1]))
    z_prev = path(prev)
    z_left = path.left_limit(nodes)
    dz = path(nodes) - z_left
    incr = f(z_left) * dz
    if path.drift != 0.0:
        incr = incr + f(z_prev) * path.drift * (nodes - prev)
    return StepPath(nodes, np.cumsum(incr))


@dataclass
class CharTriplet:
    """Time-indexed characteristics on ``grid``; ``nu_test_integrals`` maps a
    test-function id to its compensator integral ``int_0^t int g dnu``."""

    grid: np.ndarray
    B1: np.ndarray
    C11: np.ndarray
    C12: np.ndarray
    C22: np.ndarray
    nu_test_integrals: dict[str, np.ndarray] = field(default_factory=dict)


TEST_LEVELS = (1.0, 2.0)


def limit_characteristics(
    measure: LevyMeasure,
    z_path: StepPath,
    f: Callable,
    h: TruncationFn,
    grid,
    floor: float = 0.0,
    table=None,
) -> CharTriplet:
    """Characteristics of ``(int f(Z-) dZ, Z)`` evaluated along ``z_path``.

    ``B1(t) = int_0^t K_B(f(z(s-))) ds`` with ``K_B(u) = int h(ux) - u h(x) rho(dx)``,
    likewise ``C11`` (``h(ux)^2``), ``C12`` (``h(ux) h(x)``); ``C22(t) = t int h^2 d rho``.
    ``floor > 0`` restricts rho to ``|x| > floor`` (eps-truncated limit).
    """
    grid = np.asarray(grid, dtype=float)
    if np.any((grid < 0) | (grid > 1)):
        raise ValueError("grid must lie in [0, 1]")
    if table is None:
        table = limit_table(measure.alpha, measure.p, h.shape, floor, table_bound(f))
    tmax = grid.max(initial=0.0)
    jt = z_path.times[z_path.times <= tmax]
    nodes = np.union1d(np.concatenate(([0.0], jt)), grid)
    widths = np.diff(nodes)
    coef = table(f(z_path(nodes[:-1])))
    idx = np.searchsorted(nodes, grid)

    def integrate(values):
        cum = np.concatenate(([0.0], np.cumsum(values * widths)))
        return cum[idx]

    H = h.as_piecewise()
    tests = {
        f"g{a:g}": grid * rho_expectation(measure, g_a_piecewise(a), floor) for a in TEST_LEVELS
    }
    return CharTriplet(
        grid,
        integrate(coef["B1"]),
        integrate(coef["C11"]),
        integrate(coef["C12"]),
        grid * rho_expectation(measure, H * H, floor),
        tests,
    )
