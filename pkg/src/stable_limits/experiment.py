"""Seeded replication of pre-limit and limit paths, and the per-(n, t) summary."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import ExperimentConfig
from .diagnostics import ecf_distance, hill_estimate, ks_two_sample
from .heavy_tail import LevyMeasure, TailLaw, TruncationFn, scaling_constants
from .limit import LimitPathConfig, euler_stochastic_integral, simulate_levy_path
from .paths import functional_increments, truncated_increments
from .prelimit import PreLimitKernel, characteristic_gaps, vague_check

log = logging.getLogger(__name__)

ROLE_PRELIMIT, ROLE_LIMIT, ROLE_HILL = 0, 1, 2
HILL_SAMPLES, HILL_K = 10**5, 10**3
ECF_GRID = np.linspace(0.25, 4.0, 16)
QUANTITIES = ("S", "Y", "pair_sum")


def replicate_rng(master_seed: int, n: int, role: int, j: int) -> np.random.Generator:
    """Stream for replicate ``j``; depends only on (seed, n, role, j)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(master_seed, spawn_key=(n, role, j))))


@dataclass
class Setup:
    cfg: ExperimentConfig
    n: int

    def __post_init__(self):
        cfg = self.cfg
        self.law = TailLaw(cfg.alpha, cfg.p)
        self.measure = LevyMeasure(cfg.alpha, cfg.p)
        self.h = TruncationFn(cfg.h_shape)
        self.f = cfg.functional
        self.sc = scaling_constants(self.law, self.n, self.h, center=cfg.center)
        eps = cfg.epsilon if cfg.regime == "theorem2" else None
        self.kernel = PreLimitKernel(self.law, self.sc, self.h, eps, True, cfg.scaled_indicator)
        self.limit_cfg = LimitPathConfig.truncated(eps) if eps else LimitPathConfig.direct(cfg.small_jump_floor)
        self.limit_floor = eps or 0.0
        self.times = np.asarray(cfg.eval_times, dtype=float)
        self.steps = np.searchsorted(np.arange(1, self.n + 1) / self.n, self.times, side="right")

    def increments(self, samples):
        if self.cfg.regime == "theorem2":
            return truncated_increments(samples, self.law, self.sc, self.h, self.cfg.epsilon, self.cfg.scaled_indicator)
        return samples / self.sc.b_n - self.sc.c_n

    def prelimit(self, j):
        samples = self.law.sample(self.n, replicate_rng(self.cfg.master_seed, self.n, ROLE_PRELIMIT, j))
        s, dy = functional_increments(self.increments(samples), self.f)
        y = np.concatenate(([0.0, 0.0], np.cumsum(dy)))
        s = np.concatenate(([0.0], s))
        values = np.stack((s[self.steps], y[self.steps]), axis=-1)
        gaps = None
        if j < self.cfg.char_paths:
            g = characteristic_gaps(self.kernel, self.measure, samples, self.f, self.times, self.limit_floor)
            gaps = np.stack((g["B1"], g["C11"], g["C22"]), axis=-1)
        return values, gaps

    def limit(self, j):
        rng = replicate_rng(self.cfg.master_seed, self.n, ROLE_LIMIT, j)
        z = simulate_levy_path(self.measure, self.limit_cfg, self.h, rng)
        integral = euler_stochastic_integral(z, self.f, extra_times=self.times, max_step=1.0 / self.n)
        return np.stack((z(self.times), integral(self.times)), axis=-1)


def _run_block(setup: Setup, indices):
    return [(j, *setup.prelimit(j), setup.limit(j)) for j in indices]


def simulate_n(cfg: ExperimentConfig, n: int, threads: int = 1) -> dict[str, np.ndarray]:
    """Raw draws for one ``n``: arrays indexed (replicate, eval time, coordinate)."""
    setup = Setup(cfg, n)
    R, T = cfg.replicate_count, len(cfg.eval_times)
    pre = np.empty((R, T, 2))
    lim = np.empty((R, T, 2))
    n_char = min(cfg.char_paths, R)
    gaps = np.empty((n_char, T, 3))
    # build coefficient tables before fanning out
    if n_char:
        setup.kernel.table(setup.f)
    blocks = [range(k, min(k + 256, R)) for k in range(0, R, 256)]
    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        for block in pool.map(lambda idx: _run_block(setup, idx), blocks):
            for j, values, gap, limit_values in block:
                pre[j] = values
                lim[j] = limit_values
                if gap is not None:
                    gaps[j] = gap
    hill_rng = replicate_rng(cfg.master_seed, n, ROLE_HILL, 0)
    hill = hill_estimate(setup.law.sample(HILL_SAMPLES, hill_rng), HILL_K)
    lower = max(0.5, 2.0 * n ** (-1.0 / cfg.alpha))
    vague = vague_check(setup.kernel, setup.measure, np.linspace(lower, max(10.0, lower), 200))
    return {
        "prelimit": pre,
        "limit": lim,
        "char_gaps": gaps.mean(axis=0) if n_char else np.full((T, 3), np.nan),
        "vague_sup": np.float64(vague),
        "hill_alpha": np.float64(hill),
    }


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[dict] = field(default_factory=list)
    raw: dict[int, dict[str, np.ndarray]] = field(default_factory=dict)
    wall_clock: float = 0.0


def summarize(cfg: ExperimentConfig, raw: dict[int, dict[str, np.ndarray]]) -> list[dict]:
    """One row per (n, t, quantity); fully determined by ``cfg`` and the raw arrays."""
    rows = []
    for n in cfg.n_values:
        data = raw[n]
        pre, lim = data["prelimit"], data["limit"]
        for ti, t in enumerate(cfg.eval_times):
            b1, c11, c22 = (float(v) for v in data["char_gaps"][ti])
            for quantity in QUANTITIES:
                if quantity == "pair_sum":
                    a, b = pre[:, ti].sum(axis=-1), lim[:, ti].sum(axis=-1)
                else:
                    k = QUANTITIES.index(quantity)
                    a, b = pre[:, ti, k], lim[:, ti, k]
                ks = ks_two_sample(a, b, cfg.ks_level)
                rows.append(
                    {
                        "experiment_id": cfg.experiment_id,
                        "n": int(n),
                        "t": float(t),
                        "quantity": quantity,
                        "ks_stat": ks.statistic,
                        "ks_threshold": ks.threshold,
                        "pass": bool(ks.passed),
                        "ecf_dist": ecf_distance(a, b, ECF_GRID),
                        "b1_gap": b1,
                        "c11_gap": c11,
                        "c22_gap": c22,
                        "vague_sup": float(data["vague_sup"]),
                        "hill_alpha": float(data["hill_alpha"]),
                        "seed": int(cfg.master_seed),
                    }
                )
    return rows


def run_convergence_experiment(cfg: ExperimentConfig, threads: int = 1) -> ExperimentReport:
    start = time.perf_counter()
    raw = {}
    for n in cfg.n_values:
        log.info("simulating n=%d (%d replicates)", n, cfg.replicate_count)
        raw[n] = simulate_n(cfg, n, threads)
    report = ExperimentReport(cfg, summarize(cfg, raw), raw)
    report.wall_clock = time.perf_counter() - start
    return report


def ks_pass_count(cfg: ExperimentConfig, seeds, quantity: str, t: float, n: int | None = None) -> tuple[int, list[float]]:
    """Run ``cfg`` under each master seed; count KS passes for one (n, t, quantity)."""
    n = n or cfg.n_values[0]
    stats, passes = [], 0
    for seed in seeds:
        rep = run_convergence_experiment(cfg.with_seed(seed))
        row = next(r for r in rep.rows if r["n"] == n and math.isclose(r["t"], t) and r["quantity"] == quantity)
        stats.append(row["ks_stat"])
        passes += row["pass"]
    return passes, stats
