"""Sampled law, limit Levy measure, truncation function and scaling constants.

The sampled law is the two-sided Pareto with support floor 1::

    P(X > x) = p * x**-alpha,   P(X < -x) = q * x**-alpha,   x >= 1

so that ``n * P(X / b_n in .)`` coincides with the limit measure ``rho`` on
``|x| >= 1 / b_n`` when ``b_n = n**(1/alpha)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from ._piecewise import PiecewisePoly
from .errors import DomainError, IntegrabilityError, QuadratureError

QUAD_TOL = 1e-10
SIDES = ("positive", "negative", "absolute")


def _check_tail_params(alpha, p):
    if not 0.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (0, 2), got {alpha}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class TailLaw:
    """Two-sided Pareto law with tail index ``alpha`` and tail weights ``p``, ``1 - p``.

    ``p`` may sit on the boundary {0, 1} for one-sided experiments; the
    convergence theorems themselves ask for ``0 < p < 1``.
    """

    alpha: float
    p: float
    support_floor: float = 1.0

    def __post_init__(self):
        _check_tail_params(self.alpha, self.p)
        if self.support_floor != 1.0:
            raise ValueError("support floor is fixed at 1.0")

    @property
    def q(self) -> float:
        return 1.0 - self.p

    def magnitude(self, u):
        """Inverse transform of the magnitude tail: ``u**(-1/alpha)`` for u in (0, 1]."""
        return np.asarray(u, dtype=float) ** (-1.0 / self.alpha)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if count < 1:
            raise ValueError("count must be positive")
        # 1 - U keeps the uniform inside (0, 1]
        mags = self.magnitude(1.0 - rng.random(count))
        signs = np.where(rng.random(count) < self.p, 1.0, -1.0)
        return signs * mags

    def tail_prob(self, x, side: str = "absolute"):
        x = np.asarray(x, dtype=float)
        if np.any(x < self.support_floor):
            raise DomainError("tail formula only holds for x >= 1")
        base = x ** (-self.alpha)
        weight = {"positive": self.p, "negative": self.q, "absolute": 1.0}[side]
        out = weight * base
        return float(out) if out.ndim == 0 else out

    def density(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        w = np.where(x > 0, self.p, self.q)
        safe = np.where(ax >= 1.0, ax, 1.0)
        return np.where(ax >= 1.0, w * self.alpha * safe ** (-self.alpha - 1.0), 0.0)


@dataclass(frozen=True)
class LevyMeasure:
    """Power-law Levy measure: rho((x, inf]) = p x^-alpha, rho([-inf, -x)) = q x^-alpha."""

    alpha: float
    p: float

    def __post_init__(self):
        _check_tail_params(self.alpha, self.p)

    @property
    def q(self) -> float:
        return 1.0 - self.p

    def tail(self, x, side: str = "absolute"):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise DomainError("rho tails are defined for x > 0")
        weight = {"positive": self.p, "negative": self.q, "absolute": 1.0}[side]
        return weight * x ** (-self.alpha)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        w = np.where(x > 0, self.p, self.q)
        with np.errstate(divide="ignore"):
            return np.where(ax > 0, w * self.alpha * ax ** (-self.alpha - 1.0), np.inf)


@dataclass(frozen=True)
class TruncationFn:
    """Truncation function equal to x on ``|x| <= 1/2`` and zero beyond 1.

    ``taper`` decays linearly to 0 on ``1/2 < |x| <= 1`` and is continuous;
    ``hard`` is ``x * 1{|x| <= 1}``.
    """

    shape: str = "taper"
    inner_radius: float = 0.5
    outer_radius: float = 1.0

    def __post_init__(self):
        if self.shape not in ("taper", "hard"):
            raise ValueError(f"unknown truncation shape {self.shape!r}")
        if (self.inner_radius, self.outer_radius) != (0.5, 1.0):
            raise ValueError("radii are fixed at r0 = 1/2, r1 = 1")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        if self.shape == "hard":
            out = np.where(ax <= 1.0, x, 0.0)
        else:
            out = np.where(ax <= 0.5, x, np.where(ax <= 1.0, np.sign(x) * (1.0 - ax), 0.0))
        return float(out) if out.ndim == 0 else out

    @property
    def kinks(self) -> tuple[float, ...]:
        return (0.5, 1.0) if self.shape == "taper" else (1.0,)

    def as_piecewise(self) -> PiecewisePoly:
        if self.shape == "hard":
            return PiecewisePoly.from_pieces([(-1.0, 1.0, (0.0, 1.0))])
        return PiecewisePoly.from_pieces(
            [
                (-1.0, -0.5, (-1.0, -1.0)),
                (-0.5, 0.5, (0.0, 1.0)),
                (0.5, 1.0, (1.0, -1.0)),
            ]
        )


@dataclass(frozen=True)
class ScalingConstants:
    n: int
    b_n: float
    c_n: float

    def __post_init__(self):
        if self.n < 1 or self.b_n <= 0:
            raise ValueError("need n >= 1 and b_n > 0")


def sample_tail_law(law: TailLaw, count: int, rng: np.random.Generator) -> np.ndarray:
    return law.sample(count, rng)


def tail_prob(law: TailLaw, x, side: str = "absolute"):
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    return law.tail_prob(x, side)


def normalizer_bn(law: TailLaw, n: int) -> float:
    """Tail quantile ``inf{x > 0 : n P(|X| > x) <= 1}``, equal to ``n**(1/alpha)`` here."""
    if n < 1:
        raise ValueError("n must be positive")
    return float(n) ** (1.0 / law.alpha)


def truncation_eval(h: TruncationFn, x):
    return h(x)


# ---------------------------------------------------------------------------
# quadrature against power densities


def _quad(func, a, b, points=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(
            func, a, b, epsabs=QUAD_TOL / 20, epsrel=1e-12, limit=400, points=points, full_output=1
        )
    value, abserr = res[0], res[1]
    if not math.isfinite(value) or abserr > QUAD_TOL:
        raise QuadratureError(f"quadrature on [{a}, {b}] did not converge (err ~ {abserr:.2e})")
    return value


def power_integral(
    func: Callable[[float], float],
    alpha: float,
    lo: float = 0.0,
    hi: float = math.inf,
    points: Sequence[float] = (),
) -> float:
    """Adaptive quadrature of ``func(x) * alpha * x**(-alpha - 1)`` over ``[lo, hi]``.

    ``points`` are kinks of ``func``; the range is split there. The segment
    touching 0 is mapped by ``x = k s**(1/(2-alpha))`` and the segment reaching
    infinity by ``x = a u**(-1/alpha)``, which turns both ends into finite
    integrals over (0, 1].
    """
    if not 0.0 <= lo < hi:
        raise DomainError("need 0 <= lo < hi")
    knots = sorted({lo, hi, *(x for x in points if lo < x < hi)})
    if lo == 0.0 and len(knots) == 2 and hi == math.inf:
        knots = [0.0, 1.0, math.inf]
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        if a == 0.0:
            x1 = b * 1e-4
            x2 = b * 1e-8
            f1, f2 = abs(func(x1)), abs(func(x2))
            if f2 > 0.0 and (f1 == 0.0 or (f2 / x2**alpha) >= 0.999 * (f1 / x1**alpha)):
                raise IntegrabilityError("integrand does not vanish fast enough at 0")
            scale = alpha * b ** (2.0 - alpha) / (2.0 - alpha)
            expo = 1.0 / (2.0 - alpha)

            def seg0(s, b=b):
                x = b * s**expo
                return func(x) / (x * x)

            total += scale * _quad(seg0, 0.0, 1.0)
        elif b == math.inf:
            def seg_inf(u, a=a):
                return func(a * u ** (-1.0 / alpha))

            total += a ** (-alpha) * _quad(seg_inf, 0.0, 1.0)
        elif b > 8.0 * a:
            # wide ranges: integrate in log x so the power density stays resolved
            total += _quad(
                lambda t: func(math.exp(t)) * alpha * math.exp(-alpha * t), math.log(a), math.log(b)
            )
        else:
            total += _quad(lambda x: func(x) * alpha * x ** (-alpha - 1.0), a, b)
    return total


def rho_integrate(
    measure: LevyMeasure,
    g: Callable[[float], float],
    domain: tuple[float, float] = (0.0, math.inf),
    points: Sequence[float] = (),
) -> float:
    """Integral of ``g`` against ``rho`` over ``domain[0] < |x| <= domain[1]``.

    ``points`` lists the magnitudes where ``g`` has kinks (applied to both sides).
    """
    lo, hi = domain
    pos = power_integral(g, measure.alpha, lo, hi, points) if measure.p else 0.0
    neg = power_integral(lambda y: g(-y), measure.alpha, lo, hi, points) if measure.q else 0.0
    return measure.p * pos + measure.q * neg


# ---------------------------------------------------------------------------
# exact routes


def law_expectation(law: TailLaw, G: PiecewisePoly, floor: float = 1.0) -> float:
    """``E[G(X); |X| >= floor]`` for a piecewise polynomial ``G`` (floor >= 1)."""
    return G.integrate_power(law.alpha, law.p, law.q, max(floor, 1.0))


def rho_expectation(measure: LevyMeasure, G: PiecewisePoly, floor: float = 0.0) -> float:
    """``int_{|x| > floor} G d rho`` for a piecewise polynomial ``G``."""
    return G.integrate_power(measure.alpha, measure.p, measure.q, floor)


@lru_cache(maxsize=256)
def _centering_exact(alpha, p, n, shape, floor_scaled):
    law = TailLaw(alpha, p)
    b = normalizer_bn(law, n)
    G = TruncationFn(shape).as_piecewise().compose_affine(1.0 / b)
    return law_expectation(law, G, floor=floor_scaled * b)


def _centering_quad(law, b, h, floor):
    def side(sign):
        w = law.p if sign > 0 else law.q
        if w == 0.0:
            return 0.0
        pts = [k * b for k in h.kinks]
        return w * power_integral(lambda x: h(sign * x / b), law.alpha, floor, math.inf, pts)

    return side(1.0) + side(-1.0)


def centering_cn(law: TailLaw, n: int, h: TruncationFn, method: str = "exact") -> float:
    """``c_n = E h(X / b_n)``; ``method`` is ``exact`` (closed form) or ``quad``."""
    if method == "exact":
        return _centering_exact(law.alpha, law.p, n, h.shape, 0.0)
    if method == "quad":
        return _centering_quad(law, normalizer_bn(law, n), h, 1.0)
    raise ValueError(f"unknown method {method!r}")


def truncated_centering(
    law: TailLaw, n: int, h: TruncationFn, eps: float, scaled: bool = True, method: str = "exact"
) -> float:
    """``E h(Y 1{|Y| >= eps})`` with ``Y = X/b_n`` (``scaled``) or ``E h(Y 1{|X| >= eps})``."""
    b = normalizer_bn(law, n)
    floor = eps * b if scaled else eps
    if method == "exact":
        return _centering_exact(law.alpha, law.p, n, h.shape, floor / b)
    return _centering_quad(law, b, h, max(floor, 1.0))


def scaling_constants(law: TailLaw, n: int, h: TruncationFn, center: bool = True) -> ScalingConstants:
    b = normalizer_bn(law, n)
    return ScalingConstants(n, b, centering_cn(law, n, h) if center else 0.0)


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class TestFunction:
    """Real test function with known kink locations (used to split quadrature)."""

    __test__ = False  # not a pytest class

    name: str
    func: Callable[[float], float]
    kinks: tuple[float, ...] = ()

    def __call__(self, x):
        return self.func(x)


def g_a(a: float) -> TestFunction:
    """``g_a(x) = min(max(a|x| - 1, 0), 1)``: zero on ``|x| <= 1/a``, one beyond ``2/a``."""
    if a <= 0:
        raise ValueError("a must be positive")
    return TestFunction(
        f"g_{a:g}",
        lambda x: min(max(a * abs(x) - 1.0, 0.0), 1.0),
        (-2.0 / a, -1.0 / a, 1.0 / a, 2.0 / a),
    )


def g_a_piecewise(a: float) -> PiecewisePoly:
    return PiecewisePoly.from_pieces(
        [
            (-math.inf, -2.0 / a, (1.0,)),
            (-2.0 / a, -1.0 / a, (-1.0, -a)),
            (-1.0 / a, 1.0 / a, ()),
            (1.0 / a, 2.0 / a, (-1.0, a)),
            (2.0 / a, math.inf, (1.0,)),
        ]
    )


def resolve_test_function(name: str, h: TruncationFn | None = None) -> TestFunction:
    """Registry: ``zero``, ``h``, ``h2``, ``g1``, ``g2``, ``g_a:<a>``, ``outside:<A>``."""
    h = h or TruncationFn()
    ks = tuple(s * k for k in h.kinks for s in (-1.0, 1.0))
    if name == "zero":
        return TestFunction("zero", lambda x: 0.0)
    if name == "h":
        return TestFunction("h", lambda x: float(h(x)), ks)
    if name == "h2":
        return TestFunction("h2", lambda x: float(h(x)) ** 2, ks)
    if name in ("g1", "g2"):
        return g_a(float(name[1:]))
    if name.startswith("g_a:"):
        return g_a(float(name[4:]))
    if name.startswith("outside:"):
        A = float(name[8:])
        return TestFunction(name, lambda x: 1.0 if abs(x) > A else 0.0, (-A, A))
    raise KeyError(f"unknown test function {name!r}")
