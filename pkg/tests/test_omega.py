import cmath
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy import special

from omegaperiods.algebra import Potential
from omegaperiods.errors import InputError, PoleProximityError, ToleranceNotMet
from omegaperiods.omega import OmegaEvaluator, PoleInfo, monomial_omega
from omegaperiods.quadrature import QuadConfig

SQRT_HALF_PI = math.sqrt(math.pi / 2)


@pytest.fixture(scope="module")
def gamma_ev():
    return OmegaEvaluator(Potential(1))


@pytest.fixture(scope="module")
def gaussian_ev():
    return OmegaEvaluator(Potential(2))


@pytest.fixture(scope="module")
def cubic_ev():
    return OmegaEvaluator(Potential(3, (0.3 - 0.2j, 0.1 + 0.4j)))


def test_omega_pos_examples(gamma_ev, gaussian_ev):
    assert gamma_ev.omega_pos(0, 1) == pytest.approx(1, rel=1e-10)
    assert gamma_ev.omega_pos(0, 5) == pytest.approx(24, rel=1e-10)
    assert gaussian_ev.omega_pos(0, 1) == pytest.approx(SQRT_HALF_PI, rel=1e-10)
    assert gaussian_ev.omega_pos(1, 3) == pytest.approx(-SQRT_HALF_PI, rel=1e-10)


def test_omega_pos_rejects(gamma_ev, cubic_ev):
    with pytest.raises(InputError):
        gamma_ev.omega_pos(0, -0.5)
    with pytest.raises(InputError):
        cubic_ev.omega_pos(3, 1)
    with pytest.raises(InputError):
        cubic_ev.omega(-1, 1)


def test_omega_reports_its_error(gamma_ev):
    estimate = gamma_ev.omega(0, 2.5 + 1j, full_output=True)
    exact = special.gamma(2.5 + 1j)
    assert abs(estimate.value - exact) <= max(estimate.error, 1e-13 * abs(exact))
    assert estimate.error <= 1e-9 * abs(estimate.value)


def test_omega_continuation(gamma_ev):
    assert gamma_ev.omega(0, -0.5) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-9)
    assert gamma_ev.omega(0, -3.5) == pytest.approx(math.gamma(-3.5), rel=1e-9)


def test_omega_at_poles(gamma_ev, gaussian_ev):
    assert gamma_ev.omega(0, 0) == PoleInfo(0, 1)
    pole = gaussian_ev.omega(1, -2 + 1e-10j)
    assert pole.n == 2
    assert pole.residue == pytest.approx(-0.5)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_omega_matches_monomial_formula(d):
    ev = OmegaEvaluator(Potential(d))
    for k in range(d):
        for s in (0.5, 2 + 1j, -0.7 + 0.3j, -2.5):
            expected = monomial_omega(d, k, s)
            assert abs(ev.omega(k, s) - expected) <= 1e-9 * abs(expected)


def test_residues(gamma_ev, gaussian_ev):
    assert gamma_ev.residue(0) == 1
    assert gamma_ev.residue(3) == pytest.approx(-1 / 6)
    assert gaussian_ev.residue(1) == 0
    assert gaussian_ev.residue(200) == pytest.approx(0, abs=1e-100)
    with pytest.raises(InputError):
        gamma_ev.residue(-1)


def test_residue_matches_the_limit(cubic_ev):
    h = 1e-4
    for n in range(11):
        expected = cubic_ev.residue(n)
        for k in range(3):
            # symmetric difference cancels the constant term of the Laurent series
            limit = h * (cubic_ev.omega(k, -n + h) - cubic_ev.omega(k, -n - h)) / 2
            assert limit == pytest.approx(expected, rel=1e-6, abs=1e-7)


def test_mittag_leffler_examples(gamma_ev, gaussian_ev, cubic_ev):
    for s in (0.5, -0.5 + 1j, 3.2):
        assert gamma_ev.mittag_leffler(0, s) == pytest.approx(complex(gamma_ev.omega(0, s)), rel=1e-9)
    assert gamma_ev.mittag_leffler(0, 0.5, N=30) == pytest.approx(math.sqrt(math.pi), rel=1e-9)
    expected = monomial_omega(2, 0, -1.5)
    assert gaussian_ev.mittag_leffler(0, -1.5) == pytest.approx(expected, rel=1e-9)
    s = 0.7 + 0.3j
    assert cubic_ev.mittag_leffler(1, s) == pytest.approx(cubic_ev.omega(1, s), rel=1e-8)


def test_mittag_leffler_rejects_poles(gamma_ev):
    with pytest.raises(PoleProximityError) as info:
        gamma_ev.mittag_leffler(0, -1)
    assert info.value.n == 1
    with pytest.raises(InputError):
        gamma_ev.mittag_leffler(0, 0.5, N=-1)


def test_omega_diff_examples(gaussian_ev):
    assert gaussian_ev.omega_diff(1, 0, 1) == pytest.approx(-math.sqrt(2 * math.pi), rel=1e-9)
    assert gaussian_ev.omega_diff(1, 0, 2) == pytest.approx(0, abs=1e-9)
    assert OmegaEvaluator(Potential.parse("d=2")).omega_diff(1, 0, 2) == pytest.approx(0, abs=1e-9)
    # t^2 exp(-t^3/3) is an exact derivative on every contour
    cubic = OmegaEvaluator(Potential(3))
    for k, l in ((1, 0), (2, 0), (2, 1)):
        assert cubic.omega_diff(k, l, 3) == pytest.approx(0, abs=1e-9)
    # entire: the poles of the two functions cancel at s = -2
    assert gaussian_ev.omega_diff(1, 0, -2) == pytest.approx(-0.5j * math.pi, rel=1e-8)
    with pytest.raises(InputError):
        gaussian_ev.omega_diff(1, 1, 0.5)


def test_omega_diff_matches_the_difference(cubic_ev):
    s = 1.3 - 0.6j
    expected = cubic_ev.omega(2, s) - cubic_ev.omega(0, s)
    assert cubic_ev.omega_diff(2, 0, s) == pytest.approx(expected, rel=1e-8)


def test_incomplete_examples(gamma_ev):
    assert gamma_ev.incomplete(1, 1) == pytest.approx(1 - math.exp(-1), rel=1e-10)
    assert gamma_ev.incomplete(1, 2) == pytest.approx(1 - math.exp(-2), rel=1e-10)
    assert gamma_ev.incomplete(2, 0.5) == pytest.approx(1 - 1.5 * math.exp(-0.5), rel=1e-10)


def test_incomplete_rejects(gamma_ev):
    with pytest.raises(InputError):
        gamma_ev.incomplete(-0.5, 1)
    with pytest.raises(InputError):
        gamma_ev.incomplete(1, 0)
    with pytest.raises(InputError):
        gamma_ev.incomplete_quad(0.05, 1)


def test_incomplete_against_direct_quadrature(cubic_ev):
    for s in (1.5, 1.5 + 0.5j):
        for z in (0.5j, 1 + 1j, -1.7 + 0.2j):
            expected = cubic_ev.incomplete_quad(s, z)
            assert cubic_ev.incomplete(s, z) == pytest.approx(expected, rel=1e-8)


def test_incomplete_tends_to_omega(gaussian_ev, cubic_ev):
    assert gaussian_ev.incomplete(1, 8) == pytest.approx(SQRT_HALF_PI, rel=1e-10)
    s = 1.2 + 0.5j
    w1 = cubic_ev.potential.omega_k(1)
    assert cubic_ev.incomplete(s, 7 * w1) == pytest.approx(cubic_ev.omega(1, s), rel=1e-8)


def test_incomplete_principal_branch_differs_on_the_last_ray(cubic_ev):
    # arg w_2 = 4 pi / 3 lies outside the principal range of the incomplete function
    s = 1.2 + 0.5j
    w2 = cubic_ev.potential.omega_k(2)
    continued = cubic_ev.incomplete(s, 7 * w2) * cmath.exp(2j * math.pi * s)
    assert continued == pytest.approx(cubic_ev.omega(2, s), rel=1e-8)


def test_functional_equation(cubic_ev):
    for k in range(3):
        for s in (0.4 + 0.2j, 2.5, -1.3 - 0.7j):
            assert cubic_ev.functional_residual(k, s) <= 1e-8
    with pytest.raises(PoleProximityError):
        cubic_ev.functional_residual(0, -1)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.floats(-3, 6), st.floats(-5, 5), st.integers(0, 2 ** 32 - 1))
def test_functional_equation_on_random_potentials(d, re, im, seed):
    s = complex(re, im)
    n = round(-re)
    assume(n < 0 or abs(s + n) >= 0.05)
    ev = OmegaEvaluator(Potential.random(np.random.default_rng(seed), d))
    for k in range(d):
        assert ev.functional_residual(k, s) <= 1e-8


def test_periodic_multiple_is_a_solution(cubic_ev):
    for s in (0.4 + 0.2j, 2.5, -1.3 - 0.7j):
        assert cubic_ev.periodic_residual(0, s) <= 1e-8
        assert cubic_ev.periodic_residual(2, s) <= 1e-8


@pytest.mark.parametrize("d", [2, 3])
def test_growth_on_the_strip(d):
    ev = OmegaEvaluator(Potential.random(np.random.default_rng(30 + d), d, real=True))
    for k in range(d):
        for sigma in (1, 0.5 * (1 + d), d):
            for tau in (2.5, 10, 20):
                assert ev.growth_ratio(k, sigma, tau) <= 10
    # the monomial case is |Gamma(s/d)| over Gamma(sigma/d)
    monomial = OmegaEvaluator(Potential(d))
    expected = abs(special.gamma(complex(1, 4) / d)) / special.gamma(1 / d)
    assert monomial.growth_ratio(d - 1, 1, 4) == pytest.approx(expected, rel=1e-8)
    with pytest.raises(InputError):
        monomial.growth_ratio(0, 0, 1)


def test_conjugation_of_real_potentials():
    ev = OmegaEvaluator(Potential(3, (0.3, -0.2)))
    s = 0.7 + 0.4j
    assert ev.omega(0, s.conjugate()).conjugate() == pytest.approx(ev.omega(0, s), rel=1e-9)
    mirrored = cmath.exp(-2j * math.pi * s) * ev.omega(2, s)
    assert ev.omega(1, s.conjugate()).conjugate() == pytest.approx(mirrored, rel=1e-9)
    for d in (2, 3):
        real_ev = OmegaEvaluator(Potential.random(np.random.default_rng(40 + d), d, real=True))
        for s in (0.6 - 1.1j, 2.2 + 0.5j, -1.4 + 0.8j):
            for k in range(d):
                assert real_ev.conjugation_defect(k, s) <= 1e-9
    with pytest.raises(InputError):
        OmegaEvaluator(Potential(2, (0.1j,))).conjugation_defect(0, 1)


def test_series_budget_is_enforced():
    ev = OmegaEvaluator(Potential(1), QuadConfig(series_max=20))
    with pytest.raises(ToleranceNotMet) as info:
        ev.incomplete(1, 1)
    assert info.value.estimate is not None


def test_shared_evaluator_across_threads():
    ev = OmegaEvaluator(Potential(4, (0.2, 0, -0.1j)))
    points = [complex(re, im) for re in (0.5, 1.5, -0.5) for im in (0, 2)]
    with ThreadPoolExecutor(max_workers=4) as executor:
        parallel = list(executor.map(lambda s: ev.omega(1, s), points))
    sequential = [ev.omega(1, s) for s in points]
    assert np.allclose(parallel, sequential, rtol=1e-12, atol=0)
