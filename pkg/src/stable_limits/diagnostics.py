"""Distribution-level comparisons at fixed times: KS, ECF distance, Hill, QQ."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KS_CRITICAL = {0.05: 1.358, 0.01: 1.628}


@dataclass(frozen=True)
class KSResult:
    statistic: float
    threshold: float
    passed: bool


def _nonempty(*arrays):
    out = []
    for a in arrays:
        a = np.asarray(a, dtype=float).ravel()
        if a.size == 0:
            raise ValueError("samples must be nonempty")
        out.append(a)
    return out


def ks_statistic(a, b) -> float:
    """``sup_x |ECDF_a(x) - ECDF_b(x)|`` by a merge scan over the pooled sorted sample."""
    a, b = _nonempty(a, b)
    a, b = np.sort(a), np.sort(b)
    pooled = np.concatenate((a, b))
    pooled.sort(kind="mergesort")
    # evaluate both ECDFs right after each distinct pooled value
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_threshold(n_a: int, n_b: int, level: float = 0.01) -> float:
    if level not in KS_CRITICAL:
        raise ValueError(f"level must be one of {sorted(KS_CRITICAL)}")
    return KS_CRITICAL[level] * np.sqrt((n_a + n_b) / (n_a * n_b))


def ks_two_sample(a, b, level: float = 0.01, permutation: bool = False, rng=None) -> KSResult:
    """Two-sample KS at ``level`` with the asymptotic critical value.

    ``permutation=True`` decides ``passed`` by a permutation p-value instead,
    which is the better call for small samples.
    """
    a, b = _nonempty(a, b)
    stat = ks_statistic(a, b)
    thr = float(ks_threshold(a.size, b.size, level))
    if permutation:
        return KSResult(stat, thr, ks_permutation_pvalue(a, b, rng=rng) > level)
    return KSResult(stat, thr, stat < thr)


def ks_permutation_pvalue(a, b, rounds: int = 999, rng=None) -> float:
    """Permutation p-value of the KS statistic, for small samples."""
    a, b = _nonempty(a, b)
    rng = rng or np.random.default_rng(0)
    observed = ks_statistic(a, b)
    pooled = np.concatenate((a, b))
    hits = 0
    for _ in range(rounds):
        perm = rng.permutation(pooled)
        hits += ks_statistic(perm[: a.size], perm[a.size :]) >= observed
    return (hits + 1) / (rounds + 1)


def ecf_distance(a, b, u_grid) -> float:
    """``max_u |phi_a(u) - phi_b(u)|`` for empirical characteristic functions."""
    a, b, u = _nonempty(a, b, u_grid)

    def ecf(x):
        phase = np.outer(u, x)
        return np.cos(phase).mean(axis=1) + 1j * np.sin(phase).mean(axis=1)

    return float(np.max(np.abs(ecf(a) - ecf(b))))


def hill_estimate(samples, k: int) -> float:
    """Hill estimator ``k / sum_{i<=k} log(|x|_(i) / |x|_(k+1))`` on descending magnitudes."""
    mags = np.abs(np.asarray(samples, dtype=float).ravel())
    mags = mags[mags > 0]
    if not 1 <= k < mags.size:
        raise ValueError(f"k must satisfy 1 <= k < {mags.size}")
    if np.unique(mags).size < k + 1:
        raise ValueError("fewer than k+1 distinct magnitudes")
    top = np.sort(np.partition(mags, mags.size - k - 1)[-(k + 1) :])[::-1]
    spacing = np.sum(np.log(top[:k] / top[k]))
    if spacing <= 0.0:
        raise ValueError("zero log-spacings: degenerate sample")
    return float(k / spacing)


def qq_points(a, b, m: int) -> list[tuple[float, float]]:
    if m < 2:
        raise ValueError("need at least two quantile levels")
    a, b = _nonempty(a, b)
    levels = np.arange(1, m + 1) / (m + 1)
    qa = np.quantile(a, levels, method="linear")
    qb = np.quantile(b, levels, method="linear")
    return [(float(x), float(y)) for x, y in zip(qa, qb)]
