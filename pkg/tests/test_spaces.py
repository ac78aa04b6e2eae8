import math

import numpy as np
import pytest

from strichartz_gls import (
    INF,
    GaussianSpec,
    PsiSpec,
    ZetaParams,
    box_indicator,
    box_measure,
    exponent_grid,
    fundamental_asymptotic,
    fundamental_gls,
    gaussian_sample,
    gls_norm,
    make_grid,
    moment_profile,
    space_norm,
    zeta_crossover,
    zeta_eval,
)

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def test_crossover_symmetric():
    assert zeta_crossover(1.0, 3.0, 1.0, 1.0) == pytest.approx(2.0, abs=1e-12)


def test_crossover_golden_ratio():
    # (h - 1)^1 = h^{-1} on (1, inf) has the golden ratio as its root
    h = zeta_crossover(1.0, INF, 1.0, -1.0)
    assert h == pytest.approx(GOLDEN, abs=1e-9)


def test_crossover_weighted():
    h = zeta_crossover(2.0, 4.0, 2.0, 2.0)
    assert h == pytest.approx(3.0, abs=1e-12)
    h2 = zeta_crossover(1.0, 5.0, 1.0, 2.0)
    assert (h2 - 1.0) == pytest.approx((5.0 - h2) ** 2, abs=1e-9)


def test_crossover_alpha_zero_conventions():
    assert zeta_crossover(1.0, 3.0, 0.0, 1.0) == pytest.approx(2.0)
    assert zeta_crossover(1.0, INF, 0.0, -1.0) == 1.0
    assert zeta_crossover(1.0, 3.0, 0.0, 0.0) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        zeta_crossover(1.5, 2.0, 0.0, 1.0)  # b - 1 not interior


def test_crossover_rejects_bad_interval():
    with pytest.raises(ValueError):
        zeta_crossover(3.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        zeta_crossover(1.0, 1.0, 1.0, 1.0)


def test_zeta_eval_values():
    zp = ZetaParams(1.0, 3.0, 1.0, 1.0)
    assert zp.crossover == pytest.approx(2.0)
    assert zeta_eval(zp, 1.5) == pytest.approx(0.5)
    assert zeta_eval(zp, 2.5) == pytest.approx(0.5)
    zp2 = ZetaParams(1.0, 2.0, 1.0, 1.0)
    assert zeta_eval(zp2, 1.1) == pytest.approx(0.1, rel=1e-12)


def test_zeta_continuity_at_crossover():
    for (a, b, al, be) in [(1.0, 3.0, 1.0, 1.0), (1.0, 5.0, 1.0, 2.0),
                           (1.0, INF, 1.0, -1.0), (2.0, INF, 0.5, -2.0)]:
        zp = ZetaParams(a, b, al, be)
        h = zp.crossover
        eps = 1e-9
        left = zeta_eval(zp, h - eps)
        right = zeta_eval(zp, h + eps)
        assert abs(left - right) < 1e-7 * max(left, right, 1e-30)


def test_exponent_grid_coverage():
    p = exponent_grid(1.0, 2.0)
    assert p[0] > 1.0 and p[-1] < 2.0
    assert np.all(np.diff(p) > 0)
    assert p[0] - 1.0 <= 2e-6
    assert 2.0 - p[-1] <= 2e-6
    # at least 64 points per decade of offset from the left endpoint
    decades = math.log10((p[-1] - 1.0) / (p[0] - 1.0))
    assert len(p) >= 64 * decades


def test_gls_norm_gaussian_exact_channel():
    # psi == 1 on (1.5, 4): norm is the sup of |f|_p over that range,
    # attained at p -> 1.5 for a standard gaussian
    g = make_grid(1, 40.0, 1024)
    f = gaussian_sample(g, GaussianSpec(1.0, 1))
    psi = PsiSpec.constant(1.0, 1.5, 4.0)
    val = space_norm(f, psi)
    # |g|_{1.5} = (2 pi)^{-1/6} 1.5^{-1/3}
    expected = (2 * math.pi) ** (-0.5 * (1 - 1 / 1.5)) * 1.5 ** (-1.0 / 3.0)
    assert val <= expected * (1 + 1e-9)
    assert val == pytest.approx(expected, rel=1e-3)


def test_gls_norm_indicator():
    g = make_grid(1, 32.0, 1024)
    f = box_indicator(g, 4)
    assert box_measure(g, 4) == 0.25
    psi = PsiSpec.constant(1.0, 1.5, 4.0)
    # sup of delta^{1/p} over (1.5, 4) at delta = 1/4 is at p = 4
    assert space_norm(f, psi) == pytest.approx(0.25 ** 0.25, rel=1e-4)


def test_gls_norm_zero_function():
    g = make_grid(1, 32.0, 256)
    f = box_indicator(g, 4) + (-1.0) * box_indicator(g, 4)
    psi = PsiSpec.zeta(1.0, 2.0, 1.0, 1.0)
    assert space_norm(f, psi) == 0.0


def test_gls_norm_degenerate_matches_lp():
    g = make_grid(1, 40.0, 1024)
    f = gaussian_sample(g, GaussianSpec(1.0, 1))
    psi = PsiSpec.degenerate(2.0)
    assert space_norm(f, psi) == pytest.approx((4 * math.pi) ** -0.25, rel=1e-12)


def test_gls_norm_scaling_axiom():
    g = make_grid(1, 32.0, 512)
    f = box_indicator(g, 16)
    psi = PsiSpec.zeta(1.0, 3.0, 1.0, 1.0)
    base = space_norm(f, psi)
    assert space_norm(3.0 * f, psi) == pytest.approx(3.0 * base, rel=1e-12)
    h = gaussian_sample(g, GaussianSpec(1.0, 1))
    assert space_norm(f + h, psi) <= space_norm(f, psi) + space_norm(h, psi) + 1e-12


def test_gls_norm_monotone_in_psi():
    # pointwise larger psi gives a smaller norm
    g = make_grid(1, 32.0, 512)
    f = box_indicator(g, 16)
    lo = PsiSpec.constant(1.0, 1.5, 4.0)
    hi = PsiSpec.constant(2.0, 1.5, 4.0)
    assert space_norm(f, hi) == pytest.approx(0.5 * space_norm(f, lo), rel=1e-9)


# frozen against an independent brute-force maximizer (2e7-point dense
# sampling of delta^(1/p) zeta(p)); agreement there was ~1e-15 relative
FROZEN_FUNDAMENTAL = [
    # (a, b, alpha, beta, delta, value)
    (1.0, 2.0, 1.0, 1.0, 1e-6, 9.374153571053337e-05),
    (1.0, 2.0, 1.0, 1.0, 1e-2, 2.3211698375190215e-02),
    (1.0, 2.0, 1.0, 1.0, 1e4, 4.517702633173189e+02),
]


@pytest.mark.parametrize("a,b,al,be,delta,value", FROZEN_FUNDAMENTAL)
def test_fundamental_frozen_values(a, b, al, be, delta, value):
    psi = PsiSpec.zeta(a, b, al, be)
    fv = fundamental_gls(psi, delta)
    assert fv.value == pytest.approx(value, rel=1e-9)
    assert fv.method == "numeric-sup"


def test_fundamental_degenerate_closed_form():
    psi = PsiSpec.degenerate(2.0)
    fv = fundamental_gls(psi, 0.09)
    assert fv.value == pytest.approx(0.3, rel=0)
    assert fv.method == "numeric-sup"


def test_fundamental_monotone_in_delta():
    psi = PsiSpec.zeta(1.0, 2.0, 1.0, 1.0)
    deltas = np.geomspace(1e-8, 1e4, 25)
    vals = [fundamental_gls(psi, d).value for d in deltas]
    assert all(v2 > v1 for v1, v2 in zip(vals, vals[1:]))


def test_fundamental_rejects_bad_delta():
    psi = PsiSpec.zeta(1.0, 2.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        fundamental_gls(psi, 0.0)
    with pytest.raises(ValueError):
        fundamental_gls(psi, -1.0)


def test_asymptotic_small_delta_finite_b():
    psi = PsiSpec.zeta(1.0, 2.0, 1.0, 1.0)
    zp = ZetaParams(1.0, 2.0, 1.0, 1.0)
    beta, b = 1.0, 2.0
    pref = (beta * b * b / math.e) ** beta
    deltas = [1e-6, 1e-8, 1e-10]
    ratios = []
    for d in deltas:
        asym = pref * d ** (1.0 / b) * abs(math.log(d)) ** (-beta)
        fv = fundamental_asymptotic(zp, d, regime="small")
        assert fv.value == pytest.approx(asym, rel=1e-12)
        assert fv.method == "asymptotic-small-finite-b"
        ratios.append(fundamental_gls(psi, d).value / fv.value)
    # relative drift between consecutive delta decades shrinks below 10%
    drifts = [abs(r2 / r1 - 1.0) for r1, r2 in zip(ratios, ratios[1:])]
    assert all(d2 < d1 for d1, d2 in zip(drifts, drifts[1:]))
    assert drifts[-1] < 0.10


def test_asymptotic_small_delta_infinite_b():
    psi = PsiSpec.zeta(1.0, INF, 1.0, -1.0)
    zp = ZetaParams(1.0, INF, 1.0, -1.0)
    fv = fundamental_asymptotic(zp, 1e-8, regime="small")
    assert fv.method == "asymptotic-small-infinite-b"
    # |beta|^{|beta|} |log delta|^{-|beta|} with beta = -1
    assert fv.value == pytest.approx(1.0 / abs(math.log(1e-8)), rel=1e-12)
    ratios = [
        fundamental_gls(psi, d).value / fundamental_asymptotic(zp, d, regime="small").value
        for d in (1e-8, 1e-12, 1e-16)
    ]
    drifts = [abs(r2 / r1 - 1.0) for r1, r2 in zip(ratios, ratios[1:])]
    assert drifts[-1] < 0.10


def test_asymptotic_large_delta():
    psi = PsiSpec.zeta(1.0, INF, 1.0, -1.0)
    zp = ZetaParams(1.0, INF, 1.0, -1.0)
    a, alpha = 1.0, 1.0
    pref = (a * a * alpha / math.e) ** alpha
    fv = fundamental_asymptotic(zp, 1e6, regime="large")
    assert fv.method == "asymptotic-large"
    assert fv.value == pytest.approx(pref * 1e6 * math.log(1e6) ** -1.0, rel=1e-12)
    ratios = [
        fundamental_gls(psi, d).value / fundamental_asymptotic(zp, d, regime="large").value
        for d in (1e6, 1e9, 1e12)
    ]
    drifts = [abs(r2 / r1 - 1.0) for r1, r2 in zip(ratios, ratios[1:])]
    assert drifts[-1] < 0.10


def test_asymptotic_large_delta_worked_value():
    zp = ZetaParams(2.0, INF, 1.0, -1.0)
    fv = fundamental_asymptotic(zp, math.exp(20.0), regime="large")
    # (a^2 alpha / e)^alpha delta^{1/a} (log delta)^{-a} at delta = e^20
    assert fv.value == pytest.approx((4.0 / math.e) * math.exp(10.0) / 400.0, rel=1e-12)
    assert fv.value == pytest.approx(81.03083927575385, rel=1e-12)


def test_asymptotic_regime_guards():
    zp = ZetaParams(1.0, 2.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        fundamental_asymptotic(zp, 10.0, regime="small")
    with pytest.raises(ValueError):
        fundamental_asymptotic(zp, 1e-4, regime="large")
    with pytest.raises(ValueError):
        fundamental_asymptotic(zp, 1e-8, regime="sideways")
    with pytest.raises(ValueError):
        # finite b has no large-delta closed form
        fundamental_asymptotic(zp, 1e6, regime="large")


def test_moment_norm_consistency():
    # gls_norm of an indicator agrees with a direct sup over the profile
    g = make_grid(1, 32.0, 512)
    f = box_indicator(g, 32)
    psi = PsiSpec.zeta(1.0, 3.0, 1.0, 1.0)
    val = space_norm(f, psi)
    p = exponent_grid(1.0, 3.0)
    prof = moment_profile(f, p)
    direct = max(v / psi.psi(pp) for pp, v in zip(p, prof.values))
    assert val == pytest.approx(direct, rel=1e-10)
