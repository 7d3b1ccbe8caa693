import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stable_limits import (
    FunctionalF,
    LevyMeasure,
    LimitPathConfig,
    StepPath,
    TailLaw,
    TruncationFn,
    euler_stochastic_integral,
    limit_characteristics,
    rho_integrate,
    scaling_constants,
    simulate_levy_path,
)
from stable_limits.diagnostics import ks_two_sample
from stable_limits.limit import drift_constant, jump_records, simulate_jumps, small_jump_variance
from stable_limits.tables import limit_coefficients, limit_table

H = TruncationFn()
SINE = FunctionalF("sine")

jump_paths = st.lists(
    st.tuples(st.floats(1e-3, 1.0), st.floats(-5, 5).filter(lambda v: abs(v) > 1e-3)),
    min_size=1,
    max_size=12,
    unique_by=lambda tj: tj[0],
)


def _path(jumps, drift=0.0):
    jumps = sorted(jumps)
    times = np.array([t for t, _ in jumps])
    return StepPath(times, np.cumsum([j for _, j in jumps]), drift=drift)


# -- configuration ---------------------------------------------------------------


def test_config_regime_gate():
    with pytest.raises(ValueError):
        LimitPathConfig.direct(0.5)
    with pytest.raises(ValueError):
        LimitPathConfig.truncated(0.6)
    with pytest.raises(ValueError):
        simulate_levy_path(LevyMeasure(1.2, 0.5), LimitPathConfig.direct(), H, np.random.default_rng(0))
    with pytest.raises(ValueError):
        simulate_levy_path(LevyMeasure(0.8, 0.5), LimitPathConfig.truncated(0.1), H, np.random.default_rng(0))


def test_small_jump_variance_budget():
    # dropped compensated jumps below delta contribute far less than KS resolution
    assert small_jump_variance(LevyMeasure(0.8, 0.7), 1e-4) < (0.1 * 0.0364) ** 2


# -- simulation -------------------------------------------------------------------


@pytest.mark.parametrize("cfg,alpha", [(LimitPathConfig.direct(1e-3), 0.6), (LimitPathConfig.truncated(0.2), 1.4)])
def test_path_starts_at_zero(cfg, alpha):
    z = simulate_levy_path(LevyMeasure(alpha, 0.4), cfg, H, np.random.default_rng(1))
    assert z(0.0) == 0.0


def test_one_sided_jump_part_nondecreasing():
    z = simulate_levy_path(LevyMeasure(0.5, 1.0), LimitPathConfig.direct(1e-3), H, np.random.default_rng(2))
    grid = np.linspace(0, 1, 5001)
    jump_part = z(grid) - z.drift * grid
    assert np.all(np.diff(jump_part) >= 0.0)
    assert all(r.size > 0 for r in jump_records(z))


def test_poisson_count_of_large_jumps():
    m, rng = LevyMeasure(1.2, 0.6), np.random.default_rng(3)
    counts = np.array([np.sum(np.abs(simulate_jumps(m, 0.1, rng)[1]) > 0.5) for _ in range(10**4)])
    lam = 0.5**-1.2
    assert abs(counts.mean() - lam) < 3.0 * math.sqrt(lam / counts.size)


def test_jump_sizes_follow_restricted_measure():
    m, rng = LevyMeasure(0.7, 0.3), np.random.default_rng(4)
    sizes = np.concatenate([simulate_jumps(m, 0.05, rng)[1] for _ in range(2000)])
    assert np.all(np.abs(sizes) > 0.05)
    frac = np.mean(sizes > 0)
    assert abs(frac - 0.3) < 4.0 * math.sqrt(0.21 / sizes.size)


def test_drift_constant_matches_quadrature():
    m = LevyMeasure(1.3, 0.8)
    quad = rho_integrate(m, lambda x: float(H(x)), domain=(0.1, math.inf), points=(0.5, 1.0))
    assert drift_constant(m, 0.1, H) == pytest.approx(quad, abs=1e-10)


# -- Euler integral ---------------------------------------------------------------


@given(jump_paths)
def test_constant_integrand_reproduces_path(jumps):
    z = _path(jumps)
    out = euler_stochastic_integral(z, lambda x: np.ones_like(x))
    grid = np.linspace(0, 1, 101)
    np.testing.assert_allclose(out(grid), z(grid) - z(0.0), atol=1e-12)
    np.testing.assert_array_equal(out.times, z.times)


def test_constant_integrand_with_drift_at_nodes():
    z = _path([(0.3, 1.0), (0.7, -0.5)], drift=-0.4)
    out = euler_stochastic_integral(z, lambda x: np.ones_like(x), max_step=0.1)
    grid = np.arange(11) / 10
    np.testing.assert_allclose(out(grid), z(grid), atol=1e-12)


def test_single_jump_uses_left_limit():
    z = _path([(0.4, 2.5)])
    out = euler_stochastic_integral(z, lambda x: np.cos(x) + 3.0)
    assert out(1.0) == pytest.approx(4.0 * 2.5)


def test_two_jump_hand_example():
    z = _path([(0.3, 1.0), (0.7, 2.0)])
    out = euler_stochastic_integral(z, lambda x: np.asarray(x) ** 2)
    assert out(1.0) == pytest.approx(2.0)
    assert out(0.5) == 0.0


@given(jump_paths, st.floats(-3, 3), st.floats(-3, 3), st.floats(-1, 1))
def test_integrator_linearity(jumps, a, b, drift):
    z = _path(jumps, drift)
    f, g = np.sin, np.cos
    lhs = euler_stochastic_integral(z, lambda x: a * f(x) + b * g(x), max_step=0.05)
    rf = euler_stochastic_integral(z, f, max_step=0.05)
    rg = euler_stochastic_integral(z, g, max_step=0.05)
    grid = np.linspace(0, 1, 37)
    np.testing.assert_allclose(lhs(grid), a * rf(grid) + b * rg(grid), atol=1e-12)


def test_max_step_refines_drift_only():
    z = _path([(0.5, 1.0)], drift=-1.0)
    coarse = euler_stochastic_integral(z, np.sin)
    fine = euler_stochastic_integral(z, np.sin, max_step=1e-4)
    # exact drift part: int_0^t sin(z(s)) (-1) ds with z(s) = -s before the jump
    exact_half = 1.0 - math.cos(0.5)
    assert fine(0.5) == pytest.approx(exact_half + math.sin(-0.5) * 1.0, abs=1e-4)
    assert abs(coarse(0.5) - fine(0.5)) > 1e-3


# -- characteristics ---------------------------------------------------------------


@pytest.mark.parametrize("floor", [0.0, 0.1])
@pytest.mark.parametrize("u", [-2.7, -1.0, -0.31, 0.002, 0.5, 1.3])
def test_table_matches_quadrature(u, floor):
    m = LevyMeasure(0.8 if floor == 0.0 else 1.3, 0.7)
    table = limit_table(m.alpha, m.p, "taper", floor, 3.0)
    got = table(np.array([u]))
    pts = sorted({0.5, 1.0, 0.5 / abs(u), 1.0 / abs(u)})
    hx = lambda x: float(H(x))
    huX = lambda x: float(H(u * x))
    quad = {
        "B1": rho_integrate(m, lambda x: huX(x) - u * hx(x), (floor, math.inf), pts),
        "C11": rho_integrate(m, lambda x: huX(x) ** 2, (floor, math.inf), pts),
        "C12": rho_integrate(m, lambda x: huX(x) * hx(x), (floor, math.inf), pts),
    }
    for name, value in quad.items():
        assert got[name][0] == pytest.approx(value, abs=1e-8)


@given(st.floats(-1.0, 1.0), st.sampled_from([0.4, 0.9, 1.5]))
@settings(max_examples=25, deadline=None)
def test_table_interpolation_error(u, alpha):
    table = limit_table(alpha, 0.6, "taper", 0.0, 1.0)
    exact = limit_coefficients(LevyMeasure(alpha, 0.6), H, 0.0)(u)
    got = table(np.array([u]))
    for k, name in enumerate(("B1", "C11", "C12")):
        assert got[name][0] == pytest.approx(exact[k], abs=1e-8)


@given(st.floats(1e-150, 1e3), st.sampled_from([0.3, 0.8, 1.6]), st.booleans())
def test_quadratic_coefficient_scaling(u, alpha, negative):
    # int h(ux)^2 d rho = |u|^alpha int h^2 d rho by the substitution y = ux
    fn = limit_coefficients(LevyMeasure(alpha, 0.6), H, 0.0)
    c11 = fn(-u if negative else u)[1]
    assert c11 == pytest.approx(u**alpha * fn(1.0)[1], rel=1e-12)


def test_coefficients_vanish_below_underflow_scale():
    fn = limit_coefficients(LevyMeasure(0.4, 0.6), H, 0.0)
    assert fn(2.2e-313) == (0.0, 0.0, 0.0)


def test_table_range_guard():
    table = limit_table(0.8, 0.5, "taper", 0.0, 1.0)
    with pytest.raises(RuntimeError):
        table(np.array([1.5]))


def _sample_path(seed, alpha=0.8):
    return simulate_levy_path(LevyMeasure(alpha, 0.7), LimitPathConfig.direct(1e-3), H, np.random.default_rng(seed))


def test_characteristics_trivial_integrands():
    m, z, grid = LevyMeasure(0.8, 0.7), _sample_path(5), np.linspace(0, 1, 21)
    one = limit_characteristics(m, z, FunctionalF("constant", 1.0), H, grid)
    np.testing.assert_allclose(one.B1, 0.0, atol=1e-12)
    zero = limit_characteristics(m, z, FunctionalF("constant", 0.0), H, grid)
    for name in ("B1", "C11", "C12"):
        np.testing.assert_allclose(getattr(zero, name), 0.0, atol=1e-12)


def test_c22_slope_alpha_one():
    m, grid = LevyMeasure(1.0, 0.5), np.linspace(0, 1, 11)
    z = simulate_levy_path(m, LimitPathConfig.truncated(0.2), H, np.random.default_rng(6))
    ch = limit_characteristics(m, z, SINE, H, grid)
    np.testing.assert_allclose(ch.C22, grid * 0.6137056388801094, atol=1e-12)
    assert ch.nu_test_integrals["g1"][-1] == pytest.approx(math.log(2.0), abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_characteristic_positivity(seed):
    m, z, grid = LevyMeasure(0.8, 0.7), _sample_path(seed), np.linspace(0, 1, 51)
    ch = limit_characteristics(m, z, SINE, H, grid)
    assert np.all(np.diff(ch.C11) >= -1e-14) and np.all(ch.C11 >= -1e-14)
    assert np.all(np.diff(ch.C22) >= 0.0) and np.all(ch.C22 >= 0.0)
    assert np.all(np.abs(ch.C12) <= np.sqrt(ch.C11 * ch.C22) + 1e-12)


def test_limit_characteristics_left_point_rule():
    m, grid = LevyMeasure(0.8, 0.7), np.array([0.0, 0.5, 1.0])
    z = _path([(0.25, 1.0), (0.75, -2.0)])
    ch = limit_characteristics(m, z, SINE, H, grid)
    coef = limit_coefficients(m, H, 0.0)
    k = lambda u: coef(math.sin(u))[0]
    expected = [0.0, 0.25 * k(0.0) + 0.25 * k(1.0), 0.25 * k(0.0) + 0.5 * k(1.0) + 0.25 * k(-1.0)]
    np.testing.assert_allclose(ch.B1, expected, atol=1e-8)


@pytest.mark.slow
def test_two_limit_constructions_agree():
    # S_n(1) at n = 1e5 against the Poisson construction of Z(1), 4000 vs 4000
    alpha, R, n = 0.8, 4000, 10**5
    law, m = TailLaw(alpha, 0.7), LevyMeasure(alpha, 0.7)
    sc = scaling_constants(law, n, H)
    passes = 0
    for seed in range(10):
        rng = np.random.default_rng([seed, 1])
        pre = np.array([np.sum(law.sample(n, rng)) / sc.b_n - n * sc.c_n for _ in range(R)])
        lim = np.array([simulate_levy_path(m, LimitPathConfig.direct(1e-4), H, rng)(1.0) for _ in range(R)])
        passes += ks_two_sample(pre, lim).passed
    assert passes >= 9
