"""Exact integration of piecewise polynomials against two-sided power densities.

The truncation functions used throughout are piecewise linear, so every
coefficient integral needed for centering constants and characteristics is
an integral of a low-degree piecewise polynomial against
``w * alpha * |x|**(-alpha - 1)``. Those integrals have closed forms.
"""

from __future__ import annotations

import bisect
import math

import numpy as np

from .errors import IntegrabilityError

_INF = math.inf


def _poly_mul(a, b):
    if not a or not b:
        return ()
    out = [0.0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0.0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return tuple(out)


def _poly_add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, bi in enumerate(b):
        out[i] += bi
    return tuple(out)


def _poly_eval(c, x):
    acc = 0.0
    for ck in reversed(c):
        acc = acc * x + ck
    return acc


def _mid(lo, hi):
    if lo == -_INF and hi == _INF:
        return 0.0
    if lo == -_INF:
        return hi - 1.0
    if hi == _INF:
        return lo + 1.0
    return 0.5 * (lo + hi)


def _power_moment(a, b, e):
    """Integral of x**(e - 1) over [a, b] with 0 <= a < b <= inf."""
    if a == 0.0:
        if e <= 0.0:
            raise IntegrabilityError(f"x^{e - 1:g} is not integrable at 0")
        if b == _INF:
            raise IntegrabilityError(f"x^{e - 1:g} is not integrable on (0, inf)")
        return b**e / e
    if b == _INF:
        if e >= 0.0:
            raise IntegrabilityError(f"x^{e - 1:g} is not integrable at infinity")
        return -(a**e) / e
    log_ratio = math.log(b / a)
    if e == 0.0:
        return log_ratio
    # expm1 form stays accurate when the exponent is close to zero
    return a**e * math.expm1(e * log_ratio) / e


class PiecewisePoly:
    """Piecewise polynomial on the real line, zero outside its edges.

    ``edges`` is increasing (may start at -inf / end at +inf); ``polys[i]``
    holds ascending coefficients valid on ``[edges[i], edges[i+1])``.
    """

    __slots__ = ("edges", "polys")

    def __init__(self, edges, polys):
        if len(edges) != len(polys) + 1:
            raise ValueError("need exactly one polynomial per interval")
        self.edges = tuple(float(e) for e in edges)
        self.polys = tuple(tuple(float(c) for c in p) for p in polys)

    @classmethod
    def from_pieces(cls, pieces):
        """Build from ``(lo, hi, coeffs)`` triples; gaps are filled with zero."""
        pieces = sorted(pieces, key=lambda pc: pc[0])
        edges = [pieces[0][0]]
        polys = []
        for lo, hi, coeffs in pieces:
            if lo > edges[-1]:
                polys.append(())
                edges.append(lo)
            elif lo < edges[-1]:
                raise ValueError("pieces overlap")
            polys.append(tuple(coeffs))
            edges.append(hi)
        return cls(edges, polys)

    @classmethod
    def constant(cls, value):
        return cls((-_INF, _INF), ((value,),))

    def _piece_at(self, x):
        i = bisect.bisect_right(self.edges, x) - 1
        if i < 0 or i >= len(self.polys):
            return ()
        return self.polys[i]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.array([_poly_eval(self._piece_at(v), v) for v in x.ravel()])
        return out.reshape(x.shape) if x.ndim else float(out[0])

    def compose_affine(self, a, b=0.0):
        """Return ``x -> self(a * x + b)``."""
        if a == 0.0:
            return PiecewisePoly.constant(_poly_eval(self._piece_at(b), b))
        new_polys = []
        for c in self.polys:
            # substitute y = a x + b into sum c_k y^k
            out = ()
            power = (1.0,)
            for ck in c:
                out = _poly_add(out, tuple(ck * v for v in power))
                power = _poly_mul(power, (b, a))
            new_polys.append(out)
        new_edges = [(e - b) / a for e in self.edges]
        if a < 0:
            new_edges.reverse()
            new_polys.reverse()
        return PiecewisePoly(new_edges, new_polys)

    def _combine(self, other, op):
        edges = sorted(set(self.edges) | set(other.edges))
        polys = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            m = _mid(lo, hi)
            polys.append(op(self._piece_at(m), other._piece_at(m)))
        return PiecewisePoly(edges, polys)

    def __mul__(self, other):
        if isinstance(other, PiecewisePoly):
            return self._combine(other, _poly_mul)
        return PiecewisePoly(self.edges, [tuple(other * c for c in p) for p in self.polys])

    __rmul__ = __mul__

    def __add__(self, other):
        return self._combine(other, _poly_add)

    def __sub__(self, other):
        return self + (-1.0) * other

    def integrate_power(self, alpha, w_pos, w_neg, floor=0.0):
        """Integral against ``w_pos*alpha*x^(-alpha-1)`` on ``x >= floor`` plus
        the mirrored negative side weighted by ``w_neg``."""
        total = 0.0
        for lo, hi, c in zip(self.edges[:-1], self.edges[1:], self.polys):
            if not any(c):
                continue
            a, b = max(lo, floor), hi
            if b > a and w_pos != 0.0:
                total += w_pos * alpha * sum(
                    ck * _power_moment(a, b, k - alpha) for k, ck in enumerate(c) if ck != 0.0
                )
            a, b = max(-hi, floor), -lo
            if b > a and w_neg != 0.0:
                total += w_neg * alpha * sum(
                    ck * (-1.0) ** k * _power_moment(a, b, k - alpha)
                    for k, ck in enumerate(c)
                    if ck != 0.0
                )
        return total
