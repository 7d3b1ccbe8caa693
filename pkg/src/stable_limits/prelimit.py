"""Pre-limit characteristics and vague-convergence diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import DomainError
from .heavy_tail import (
    LevyMeasure,
    ScalingConstants,
    TailLaw,
    TestFunction,
    TruncationFn,
    g_a,
    g_a_piecewise,
    law_expectation,
    power_integral,
    resolve_test_function,
    rho_integrate,
)
from .limit import TEST_LEVELS, CharTriplet, limit_characteristics
from .paths import StepPath, truncated_increments
from .tables import prelimit_law_parts, prelimit_table, table_bound


@dataclass(frozen=True)
class PreLimitKernel:
    """Law of one step ``X_{n,1}`` placed at each time ``i/n``.

    ``centered=False`` integrates against the uncentered ``X_1/b_n`` instead.
    With ``eps`` set, the step law is the eps-truncated one (with an atom at
    ``-c_eps`` for discarded draws).
    """

    law: TailLaw
    sc: ScalingConstants
    h: TruncationFn = TruncationFn()
    eps: float | None = None
    centered: bool = True
    scaled_indicator: bool = True

    @property
    def n(self) -> int:
        return self.sc.n

    def parts(self):
        return prelimit_law_parts(self.law, self.n, self.h, self.eps, self.centered, self.scaled_indicator)

    def steps_upto(self, t):
        """``[nt]``, computed consistently with the path jump times ``i/n``."""
        times = np.arange(1, self.n + 1) / self.n
        return np.searchsorted(times, np.asarray(t, dtype=float), side="right")

    def expect(self, g: TestFunction) -> float:
        """``E g(X_{n,1})`` by adaptive quadrature."""
        b, c, floor, atom = self.parts()
        total = atom * g(-c) if atom else 0.0
        for sign, w in ((1.0, self.law.p), (-1.0, self.law.q)):
            if w == 0.0:
                continue
            pts = [sign * b * (k + c) for k in g.kinks]
            total += w * power_integral(lambda x: g(sign * x / b - c), self.law.alpha, floor, math.inf, pts)
        return total

    def table(self, f):
        return prelimit_table(
            self.law.alpha, self.law.p, self.n, self.h.shape, self.eps, self.centered,
            self.scaled_indicator, table_bound(f),
        )

    def increments(self, samples) -> np.ndarray:
        samples = np.asarray(samples, dtype=float)
        if samples.shape != (self.n,):
            raise ValueError(f"expected {self.n} samples, got shape {samples.shape}")
        if self.eps is None:
            return samples / self.sc.b_n - self.sc.c_n
        return truncated_increments(samples, self.law, self.sc, self.h, self.eps, self.scaled_indicator)


def kernel_expectation(k: PreLimitKernel, g, t: float) -> float:
    """``int_0^t int g dnu_n = [nt] E g(X_{n,1})``."""
    if isinstance(g, str):
        g = resolve_test_function(g, k.h)
    return float(k.steps_upto(t)) * k.expect(g)


def path_characteristics(k: PreLimitKernel, samples, f: Callable, grid, table=None) -> CharTriplet:
    """Pre-limit characteristics along the realized prefix sums.

    The Y-component sums run over ``i = 2..[nt]`` (matching ``Y_n``) with
    ``u_i = f(S_n((i-1)/n))``; ``C22`` runs over ``i = 1..[nt]``. Each
    quadratic term includes the atomic correction ``-(E h(u X_{n,1}))^2``.
    """
    grid = np.asarray(grid, dtype=float)
    x = k.increments(samples)
    table = table or k.table(f)
    s = np.cumsum(x)
    coef = table(f(s[:-1]))
    m = k.steps_upto(grid)

    def partial(values):
        cum = np.concatenate(([0.0, 0.0], np.cumsum(values)))
        return cum[m]

    b, c, floor, atom = k.parts()
    H = k.h.as_piecewise().compose_affine(1.0 / b, -c)
    h0 = float(k.h(-c))
    e1 = law_expectation(k.law, H, floor) + atom * h0
    e2 = law_expectation(k.law, H * H, floor) + atom * h0 * h0
    tests = {}
    for a in TEST_LEVELS:
        G = g_a_piecewise(a).compose_affine(1.0 / b, -c)
        ga0 = g_a(a)(-c)
        tests[f"g{a:g}"] = m * (law_expectation(k.law, G, floor) + atom * ga0)
    return CharTriplet(grid, partial(coef["B1"]), partial(coef["C11"]), partial(coef["C12"]), m * (e2 - e1 * e1), tests)


def characteristic_gaps(
    k: PreLimitKernel, measure: LevyMeasure, samples, f: Callable, grid, floor: float = 0.0
) -> dict[str, np.ndarray]:
    """``|pre-limit - limit o S_n|`` on ``grid`` for B1, C11, C12, C22."""
    x = k.increments(samples)
    s_path = StepPath(np.arange(1, k.n + 1) / k.n, np.cumsum(x))
    pre = path_characteristics(k, samples, f, grid)
    lim = limit_characteristics(measure, s_path, f, k.h, grid, floor)
    return {name: np.abs(getattr(pre, name) - getattr(lim, name)) for name in ("B1", "C11", "C12", "C22")}


def vague_check(k: PreLimitKernel, measure: LevyMeasure, x_grid) -> float:
    """Sup over ``x_grid`` of ``|n P(X_1/b_n > x) - rho((x, inf])|`` and its mirror.

    Grid points must stay at or above ``max(1/2, 1/b_n)``: below the scaled
    support floor the pre-limit tail is flat and no longer tracks ``rho``.
    """
    x = np.asarray(x_grid, dtype=float)
    lower = max(0.5, 1.0 / k.sc.b_n)
    if x.size == 0 or np.any(x < lower * (1.0 - 1e-12)):
        raise DomainError(f"grid must stay >= {lower:g}, away from 0")
    b = k.sc.b_n
    bx = np.maximum(b * x, 1.0)
    worst = 0.0
    for side in ("positive", "negative"):
        pre = k.n * k.law.tail_prob(bx, side)
        worst = max(worst, float(np.max(np.abs(pre - measure.tail(x, side)))))
    return worst


def scaled_law_integral(k: PreLimitKernel, g: TestFunction) -> float:
    """``int g d(n F_n)`` with ``F_n`` the law of the uncentered ``X_1/b_n``."""
    b = k.sc.b_n
    total = 0.0
    for sign, w in ((1.0, k.law.p), (-1.0, k.law.q)):
        if w == 0.0:
            continue
        pts = [sign * b * kk for kk in g.kinks]
        total += w * power_integral(lambda x: g(sign * x / b), k.law.alpha, 1.0, math.inf, pts)
    return k.n * total


def ca_family_check(k: PreLimitKernel, measure: LevyMeasure, a_values: Iterable[float]) -> dict[float, float]:
    """``a -> |int g_a d(nF_n) - int g_a d rho|``, both sides by quadrature."""
    a_values = list(a_values)
    if not a_values:
        raise ValueError("a_values must be nonempty")
    out = {}
    for a in a_values:
        g = g_a(a)
        lim = rho_integrate(measure, g, points=(1.0 / a, 2.0 / a))
        out[a] = abs(scaled_law_integral(k, g) - lim)
    return out
