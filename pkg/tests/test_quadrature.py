import cmath
import math

import numpy as np
import pytest
from scipy import special

from omegaperiods.algebra import Potential
from omegaperiods.errors import InputError, ToleranceNotMet
from omegaperiods.quadrature import (
    Estimate, QuadConfig, cancellation_floor, integrate_ray, integrate_segment, truncation_radius,
)
from omegaperiods.quadrature.paths import Arc, Contour, Ray, Segment


def test_quad_config_defaults():
    cfg = QuadConfig()
    assert (cfg.tol, cfg.max_depth, cfg.pole_tol, cfg.series_max) == (1e-10, 40, 1e-8, 10000)


@pytest.mark.parametrize("settings", [{"tol": 0}, {"tol": 1}, {"max_depth": 0}, {"pole_tol": -1}, {"depth": 3}])
def test_quad_config_rejects(settings):
    with pytest.raises(InputError):
        QuadConfig.from_dict(settings)


def test_estimate_arithmetic():
    total = Estimate(1 + 1j, 1e-3) + Estimate(2, 2e-3) - Estimate(1j, 1e-3)
    assert total.value == 3
    assert total.error == pytest.approx(4e-3)
    assert Estimate(2, 0.1).scaled(-1j) == Estimate(-2j, 0.1)


def test_integrate_segment_examples():
    assert integrate_segment(lambda t: t, 0, 1).value == pytest.approx(0.5, rel=1e-12)
    assert integrate_segment(np.exp, 0, 1).value == pytest.approx(math.e - 1, rel=1e-12)
    assert integrate_segment(np.exp, 0, 1j).value == pytest.approx(cmath.exp(1j) - 1, rel=1e-12)


def test_integrate_segment_error_estimate():
    estimate = integrate_segment(lambda t: np.cos(20 * t), 0, 3)
    assert abs(estimate.value - math.sin(60) / 20) <= max(estimate.error, 1e-14)
    assert estimate.error <= 1e-10 * abs(estimate.value)


def test_integrate_segment_additivity():
    def f(t):
        return np.exp(1j * t) / (2 + t)

    whole = integrate_segment(f, 0, 2 + 1j).value
    parts = integrate_segment(f, 0, 1).value + integrate_segment(f, 1, 2 + 1j).value
    assert whole == pytest.approx(parts, rel=1e-10)


def test_integrate_segment_gives_up_with_best_estimate():
    cfg = QuadConfig(max_depth=5)
    with pytest.raises(ToleranceNotMet) as info:
        integrate_segment(lambda t: 1 / np.abs(t - 1 / 3), 0, 1, cfg)
    assert info.value.estimate is not None
    assert info.value.estimate.error > 0


def test_integrate_segment_rejects_non_finite_integrand():
    with pytest.raises(ToleranceNotMet):
        integrate_segment(lambda t: np.full(t.shape, np.inf), 0, 1)


def test_integrate_segment_of_a_vanishing_integral():
    estimate = integrate_segment(lambda t: np.sin(2 * np.pi * t), 0, 1)
    assert abs(estimate.value) <= 1e-12
    assert estimate.error <= cancellation_floor(QuadConfig(), 2 / math.pi) * 1.01
    # t exp(-t^2/2) is an exact derivative, so the half circle from 1 to -1 gives 0
    arc = Arc(1, 0, math.pi).integrate(lambda t, log_t: t * np.exp(-t ** 2 / 2))
    assert abs(arc.value) <= 1e-12


def test_integrate_segment_honours_atol():
    cfg = QuadConfig(tol=1e-12)
    loose = integrate_segment(lambda t: np.cos(40 * t), 0, 2 * np.pi, cfg, atol=1e-3)
    assert loose.error <= 1e-3
    assert abs(loose.value) <= 1e-3


def test_truncation_radius_gamma_case():
    R = truncation_radius(Potential(1), 0, 1, 1e-16)
    assert R == pytest.approx(16 * math.log(10), rel=1e-6)
    assert math.exp(-R) <= 1e-16


def test_truncation_radius_gaussian():
    R = truncation_radius(Potential(2), 0, 1, 1e-16)
    # int_R^inf exp(-u^2/4) du
    assert math.sqrt(math.pi) * special.erfc(R / 2) <= 1e-16 * (1 + 1e-9)
    assert 11.5 < R < 12.5


def test_truncation_radius_is_monotone():
    P0 = Potential(3, (0.4, -0.3j))
    radii = [truncation_radius(P0, 1, 2.5, eps) for eps in (1e-6, 1e-10, 1e-14, 1e-18)]
    assert radii == sorted(radii)
    assert radii[0] >= 1


def test_truncation_radius_rejects():
    with pytest.raises(InputError):
        truncation_radius(Potential(2), 0, 1, 0)
    with pytest.raises(InputError):
        truncation_radius(Potential(2), 2, 1, 1e-10)


def test_truncation_radius_soundness():
    rng = np.random.default_rng(4)
    eps = 1e-12
    for _ in range(10):
        d = int(rng.integers(1, 5))
        P0 = Potential.random(rng, d)
        k = int(rng.integers(d))
        sigma = rng.uniform(0.5, 4)
        R = truncation_radius(P0, k, sigma, eps)
        w = P0.omega_k(k)
        tail = integrate_segment(
            lambda u: np.exp((sigma - 1) * np.log(u) + P0(w * u)), R, 2 * R, atol=eps * 1e-3)
        assert abs(tail.value) <= 2 * eps


def test_integrate_ray_gamma_case():
    value = integrate_ray(lambda u: u * np.exp(-u), 0, Potential(1), 2).value
    assert value == pytest.approx(2 / math.e, rel=1e-11)


def test_integrate_ray_gaussian():
    value = integrate_ray(lambda u: np.exp(-u ** 2 / 2), 0, Potential(2), 1).value
    assert value == pytest.approx(math.sqrt(math.pi / 2) * special.erfc(1 / math.sqrt(2)), rel=1e-11)


def test_integrate_ray_is_linear():
    P0 = Potential(3, (0.2, 0.1j))
    w = P0.omega_k(1)

    def f(u):
        return np.exp(0.5 * np.log(u) + P0(w * u))

    single = integrate_ray(f, 1, P0, 1.5).value
    double = integrate_ray(lambda u: 2 * f(u), 1, P0, 1.5).value
    assert abs(double - 2 * single) <= 1e-13 * abs(single)


def test_arc_follows_the_branch():
    full_turn = Arc(1, 0, 2 * math.pi).integrate(lambda t, log_t: 1 / t)
    assert full_turn.value == pytest.approx(2j * math.pi, rel=1e-12)
    # t^(1/2) is continued along the arc, ending on the second sheet
    half = Arc(1, 0, 2 * math.pi).integrate(lambda t, log_t: np.exp(0.5 * log_t))
    assert half.value == pytest.approx(-4 / 3, rel=1e-12)


def test_segment_and_ray():
    assert Ray(0, 1, 2).integrate(lambda t, log_t: np.ones_like(t)).value == pytest.approx(1)
    ray = Ray(math.pi / 2, 1, 3).integrate(lambda t, log_t: t)
    assert ray.value == pytest.approx(-4, rel=1e-12)
    segment = Segment(1, 1j).integrate(lambda t, log_t: 1 / t)
    assert segment.value == pytest.approx(1j * math.pi / 2, rel=1e-12)


def test_segment_rejects_the_origin():
    with pytest.raises(InputError):
        Segment(-1, 1)
    with pytest.raises(InputError):
        Segment(0, 1)


def test_contour_is_continuous():
    contour = Contour([Arc(1, 0, math.pi / 2), Ray(math.pi / 2, 1, 2)])
    value = contour.integrate(lambda t, log_t: t)
    assert value.value == pytest.approx((-4 - 1) / 2, rel=1e-12)
    with pytest.raises(InputError):
        Contour([Arc(1, 0, math.pi / 2), Ray(0, 1, 2)])
