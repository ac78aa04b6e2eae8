import math

import numpy as np
import pytest

from strichartz_gls import (
    HEAT,
    INF,
    SCHRODINGER,
    GaussianSpec,
    fractional,
    gaussian_lp_exact,
    gaussian_sample,
    laplacian_propagate,
    lp_norm,
    make_grid,
    propagate,
    propagate_gaussian_exact,
    safe_time_bound,
)


def _setup(L=40.0, n=1024, sigma2=1.0):
    g = make_grid(1, L, n)
    f = gaussian_sample(g, GaussianSpec(sigma2, 1))
    return g, f


def test_heat_gaussian_exactness():
    g, f = _setup()
    t = 4.0
    assert t <= safe_time_bound(g, HEAT, 1.0)
    u = propagate(f, HEAT, t)
    exact = gaussian_sample(g, GaussianSpec(1.0 + t, 1))
    num = lp_norm(u + (-1.0) * exact, INF)
    den = lp_norm(exact, INF)
    assert num / den < 1e-10


def test_schrodinger_gaussian_exactness():
    g, f = _setup(L=60.0, n=2048)
    t = 3.0
    assert t <= safe_time_bound(g, SCHRODINGER, 1.0)
    u = propagate(f, SCHRODINGER, t)
    ev = propagate_gaussian_exact(GaussianSpec(1.0, 1), SCHRODINGER, t)
    exact = gaussian_sample(g, GaussianSpec(ev.sigma2, 1))
    num = lp_norm(u + (-1.0) * exact, INF)
    assert num / lp_norm(exact, INF) < 1e-10


def test_heat_semigroup():
    g, f = _setup()
    u1 = propagate(propagate(f, HEAT, 1.5), HEAT, 2.5)
    u2 = propagate(f, HEAT, 4.0)
    assert lp_norm(u1 + (-1.0) * u2, INF) < 1e-12


def test_fractional_semigroup():
    kind = fractional(1.5)
    g, f = _setup()
    u1 = propagate(propagate(f, kind, 1.0), kind, 2.0)
    u2 = propagate(f, kind, 3.0)
    assert lp_norm(u1 + (-1.0) * u2, INF) < 1e-12


def test_schrodinger_unitary_and_reversible():
    g, f = _setup(L=60.0, n=2048)
    u = propagate(f, SCHRODINGER, 2.0)
    assert lp_norm(u, 2.0) == pytest.approx(lp_norm(f, 2.0), rel=1e-12)
    back = propagate(u, SCHRODINGER, -2.0)
    assert lp_norm(back + (-1.0) * f, INF) < 1e-10


def test_heat_positivity_contraction_mass():
    g, f = _setup()
    u = propagate(f, HEAT, 2.0)
    assert np.all(u.values.real > -1e-15)
    assert np.max(np.abs(u.values.imag)) < 1e-15
    for p in (1.0, 2.0, INF):
        assert lp_norm(u, p) <= lp_norm(f, p) * (1 + 1e-12)
    assert lp_norm(u, 1.0) == pytest.approx(lp_norm(f, 1.0), rel=1e-12)


def test_fractional_two_matches_heat():
    # S_2(t) = T_{2t} holds exactly at the multiplier level
    g, f = _setup()
    u1 = propagate(f, fractional(2.0), 1.2)
    u2 = propagate(f, HEAT, 2.4)
    assert np.array_equal(u1.values, u2.values)


def test_propagate_time_zero_identity():
    g, f = _setup()
    u = propagate(f, HEAT, 0.0)
    assert np.array_equal(u.values, f.values)
    assert u is not f


def test_propagate_rejects_negative_time_for_dissipative():
    g, f = _setup()
    with pytest.raises(ValueError):
        propagate(f, HEAT, -1.0)
    with pytest.raises(ValueError):
        propagate(f, fractional(1.5), -1.0)


def test_fractional_rejects_bad_alpha():
    with pytest.raises(ValueError):
        fractional(0.0)
    with pytest.raises(ValueError):
        fractional(-1.0)


def test_exact_gaussian_evolution_specs():
    out = propagate_gaussian_exact(GaussianSpec(1.0, 1), HEAT, 3.0)
    assert out.sigma2 == pytest.approx(4.0)
    out = propagate_gaussian_exact(GaussianSpec(1.0, 1), SCHRODINGER, 3.0)
    assert out.sigma2 == pytest.approx(1.0 + 3.0j)
    with pytest.raises(ValueError):
        propagate_gaussian_exact(GaussianSpec(1.0, 1), fractional(1.5), 3.0)


def test_schrodinger_sup_norm_law():
    # |U_t g_1|_inf = (2 pi)^{-d/2} (1 + t^2)^{-d/4}
    g, f = _setup(L=80.0, n=4096)
    for t in (1.0, 4.0, 8.0):
        u = propagate(f, SCHRODINGER, t)
        expected = (2 * math.pi) ** -0.5 * (1 + t * t) ** -0.25
        assert lp_norm(u, INF) == pytest.approx(expected, rel=1e-9)


def test_schrodinger_lq_matches_complex_variance_formula():
    g, f = _setup(L=80.0, n=4096)
    t = 5.0
    u = propagate(f, SCHRODINGER, t)
    for q in (2.0, 3.0, INF):
        assert lp_norm(u, q) == pytest.approx(
            gaussian_lp_exact(1.0 + 1j * t, 1, q), rel=1e-9
        )


def test_laplacian_propagate_linearity():
    g, f = _setup()
    h = gaussian_sample(g, GaussianSpec(2.0, 1))
    t = 2.0
    lhs = laplacian_propagate(f + 2.0 * h, 1.5, t)
    rhs = laplacian_propagate(f, 1.5, t) + 2.0 * laplacian_propagate(h, 1.5, t)
    assert lp_norm(lhs + (-1.0) * rhs, INF) < 1e-12


def test_laplacian_propagate_alpha_two_analytic():
    # Delta applied to a gaussian of variance v: (x^2/v^2 - 1/v) g_v
    g = make_grid(1, 60.0, 4096)
    f = gaussian_sample(g, GaussianSpec(1.0, 1))
    t = 3.0
    u = laplacian_propagate(f, 2.0, t)
    v = 1.0 + 2.0 * t
    x = g.axis_coords()
    gv = gaussian_sample(g, GaussianSpec(v, 1)).values
    expected = (x * x / v ** 2 - 1.0 / v) * gv
    assert np.max(np.abs(u.values - expected)) < 1e-8


def test_laplacian_propagate_rejects_nonpositive_time():
    g, f = _setup()
    with pytest.raises(ValueError):
        laplacian_propagate(f, 2.0, 0.0)


def test_safe_time_bound_values():
    g = make_grid(1, 60.0, 1024)
    w = 10.0
    assert safe_time_bound(g, HEAT, 1.0) == pytest.approx(w * w - 1.0)
    assert safe_time_bound(g, SCHRODINGER, 1.0) == pytest.approx(
        math.sqrt((w * w - 1.0) * 1.0)
    )
    assert safe_time_bound(g, fractional(2.0), 1.0) == pytest.approx((w * w - 1.0) / 2.0)
    assert safe_time_bound(g, fractional(1.5), 1.0) == pytest.approx(w ** 1.5)
