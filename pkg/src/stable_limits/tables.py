"""Coefficient tables ``u -> integral`` shared by the limit and pre-limit characteristics.

Each characteristic integrates a coefficient ``K(f(z))`` in time, where
``K(u)`` is an integral over the jump law (e.g. ``int h(ux) - u h(x) rho(dx)``).
``K`` behaves like ``|u|**alpha`` near 0, so the table is laid out on
``u = R * s**kappa`` with ``kappa = max(4, 4/alpha)``; in ``s`` every term is
smooth enough for a cubic spline to hit ~1e-10.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from .heavy_tail import (
    LevyMeasure,
    TailLaw,
    TruncationFn,
    law_expectation,
    normalizer_bn,
    rho_expectation,
    truncated_centering,
    centering_cn,
)

TABLE_POINTS = 2048
# below this |u| the coefficients are O(|u|**alpha), negligible against the
# table tolerance, while u**2 terms underflow and kinks at 1/u overflow
TINY_U = 1e-150


class CoefficientTable:
    """Cubic-spline table of several coefficient functions on ``[-bound, bound]``."""

    def __init__(self, fn, names, bound, alpha, points=TABLE_POINTS):
        self.names = tuple(names)
        self.bound = float(bound)
        self.kappa = max(4.0, 4.0 / alpha)
        per_side = points // 2
        s = np.linspace(0.0, 1.0, per_side)
        self.splines = {}
        at_zero = fn(0.0)
        for sign in (1.0, -1.0):
            rows = [at_zero] + [fn(sign * self.bound * sk**self.kappa) for sk in s[1:]]
            vals = np.asarray(rows, dtype=float)
            self.splines[sign] = CubicSpline(s, vals, axis=0)

    def __call__(self, u) -> dict[str, np.ndarray]:
        u = np.asarray(u, dtype=float)
        au = np.abs(u)
        if np.any(au > self.bound * (1.0 + 1e-12)):
            raise RuntimeError("coefficient argument escaped the tabulated range")
        s = np.minimum(au / self.bound, 1.0) ** (1.0 / self.kappa)
        out = np.where(
            (u >= 0)[..., None], self.splines[1.0](s), self.splines[-1.0](s)
        )
        return {name: out[..., k] for k, name in enumerate(self.names)}


def table_bound(f) -> float:
    return max(float(getattr(f, "bound", 1.0)), 1.0)


# ---------------------------------------------------------------------------
# limit side


def limit_coefficients(measure: LevyMeasure, h: TruncationFn, floor: float = 0.0):
    """``u -> (K_B, K_11, K_12)`` for the limit measure restricted to ``|x| > floor``."""
    H = h.as_piecewise()

    def fn(u):
        if abs(u) < TINY_U:
            return (0.0, 0.0, 0.0)
        Hu = H.compose_affine(u)
        return (
            rho_expectation(measure, Hu - u * H, floor),
            rho_expectation(measure, Hu * Hu, floor),
            rho_expectation(measure, Hu * H, floor),
        )

    return fn


@lru_cache(maxsize=64)
def limit_table(alpha, p, shape, floor, bound, points=TABLE_POINTS) -> CoefficientTable:
    fn = limit_coefficients(LevyMeasure(alpha, p), TruncationFn(shape), floor)
    return CoefficientTable(fn, ("B1", "C11", "C12"), bound, alpha, points)


# ---------------------------------------------------------------------------
# pre-limit side


def prelimit_law_parts(law: TailLaw, n: int, h: TruncationFn, eps=None, centered=True, scaled_indicator=True):
    """Scale, shift, power-part floor (in units of X) and atom mass of the step law.

    The step law is that of ``X/b_n * 1{kept} - shift``; dropped draws sit at
    ``-shift`` with probability ``atom``.
    """
    b = normalizer_bn(law, n)
    if eps is None:
        floor, shift = 1.0, centering_cn(law, n, h)
    else:
        floor = max(1.0, eps * b if scaled_indicator else eps)
        shift = truncated_centering(law, n, h, eps, scaled=scaled_indicator)
    atom = 1.0 - floor ** (-law.alpha) if floor > 1.0 else 0.0
    return b, (shift if centered else 0.0), floor, atom


def prelimit_coefficients(law: TailLaw, n: int, h: TruncationFn, eps=None, centered=True, scaled_indicator=True):
    """``u -> (K_B, K_11, K_12)`` per step for the law of one centered scaled draw.

    ``K_B(u) = E h(uY) - u E h(Y)``, ``K_11(u) = E h(uY)^2 - (E h(uY))^2``,
    ``K_12(u) = E h(uY)h(Y) - E h(uY) E h(Y)``.
    """
    b, c, floor, atom = prelimit_law_parts(law, n, h, eps, centered, scaled_indicator)
    H = h.as_piecewise()
    Y1 = H.compose_affine(1.0 / b, -c)

    def moments(u):
        Hu = H.compose_affine(u / b, -u * c)
        hu0 = float(h(-u * c))
        h0 = float(h(-c))
        m1 = law_expectation(law, Hu, floor) + atom * hu0
        m2 = law_expectation(law, Hu * Hu, floor) + atom * hu0 * hu0
        m12 = law_expectation(law, Hu * Y1, floor) + atom * hu0 * h0
        return m1, m2, m12

    e1, e2, _ = moments(1.0)

    def fn(u):
        if abs(u) < TINY_U:
            return (0.0, 0.0, 0.0)
        m1, m2, m12 = moments(u)
        return (m1 - u * e1, m2 - m1 * m1, m12 - m1 * e1)

    return fn, (e1, e2)


@lru_cache(maxsize=64)
def prelimit_table(alpha, p, n, shape, eps, centered, scaled_indicator, bound, points=TABLE_POINTS):
    fn, _ = prelimit_coefficients(TailLaw(alpha, p), n, TruncationFn(shape), eps, centered, scaled_indicator)
    return CoefficientTable(fn, ("B1", "C11", "C12"), bound, alpha, points)
