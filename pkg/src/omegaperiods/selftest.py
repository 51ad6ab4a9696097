"""
Self check of the numerical invariants on a few random samples
"""
import cmath
import logging
import math

import numpy as np
import pandas as pd

from omegaperiods.algebra import Poly, Potential, exp_series
from omegaperiods.basis import (
    common_zero_gap, delta, delta_closed_monomial, eval_solution, omega_matrix, solve_samples,
)
from omegaperiods.errors import OmegaError
from omegaperiods.gamma_ref import gamma
from omegaperiods.omega import OmegaEvaluator
from omegaperiods.quadrature import QuadConfig, TAIL_FRACTION, integrate_segment, truncation_radius
from omegaperiods.reduction import eval_reduction, reduce_tpoly

logger = logging.getLogger(__name__)


def _off_poles(rng, re_range, im_range, distance=0.05):
    while True:
        s = complex(rng.uniform(*re_range), rng.uniform(*im_range))
        n = round(-s.real)
        if n < 0 or abs(s + n) >= distance:
            return s


def _gamma_regression(rng, cfg, samples):
    ev = OmegaEvaluator(Potential(1), cfg)
    worst = 0.0
    for _ in range(samples):
        s = _off_poles(rng, (-4.5, 8), (-10, 10))
        expected = gamma(s).value
        worst = max(worst, abs(ev.omega(0, s) - expected) / abs(expected))
    return worst <= 1e-9, "max relative error {:.3g}".format(worst)


def _functional_equation(rng, cfg, samples):
    worst = 0.0
    for d in (1, 2, 3):
        ev = OmegaEvaluator(Potential.random(rng, d), cfg)
        for _ in range(samples):
            s = _off_poles(rng, (-3, 6), (-5, 5))
            for k in range(d):
                worst = max(worst, ev.functional_residual(k, s))
    return worst <= 1e-8, "max residual {:.3g}".format(worst)


def _residues(rng, cfg, samples):
    ev = OmegaEvaluator(Potential.random(rng, 3), cfg)
    h = 1e-4
    worst = 0.0
    for n in range(min(samples, 10) + 1):
        expected = ev.residue(n)
        for k in range(3):
            coarse = h * ev.omega(k, -n + h)
            fine = h / 2 * ev.omega(k, -n + h / 2)
            worst = max(worst, abs(2 * fine - coarse - expected) / (1 + abs(expected)))
    return worst <= 1e-5, "max residue defect {:.3g}".format(worst)


def _mittag_leffler(rng, cfg, samples):
    worst = 0.0
    for d in (1, 2, 3):
        ev = OmegaEvaluator(Potential.random(rng, d), cfg)
        for _ in range(samples):
            s = _off_poles(rng, (-2, 4), (-3, 3))
            k = int(rng.integers(d))
            direct = ev.omega(k, s)
            worst = max(worst, abs(ev.mittag_leffler(k, s) - direct) / max(abs(direct), 1.0))
    return worst <= 2 * cfg.tol, "max deviation {:.3g}".format(worst)


def _closed_form(rng, cfg, samples):
    worst = 0.0
    for d in range(1, 5):
        ev = OmegaEvaluator(Potential(d), cfg)
        for s0 in (0.3, 1, 2, 1 + 2j):
            value = delta(ev, s0).value
            worst = max(worst, abs(value - delta_closed_monomial(d, s0)) / abs(value))
    return worst <= 1e-8, "max relative deviation {:.3g}".format(worst)


def _non_vanishing(rng, cfg, samples):
    smallest_det = smallest_gap = math.inf
    for _ in range(samples):
        d = int(rng.integers(1, 5))
        ev = OmegaEvaluator(Potential.random(rng, d), cfg)
        s0 = _off_poles(rng, (-2.5, 3), (-3, 3))
        entries = omega_matrix(ev, s0).entries
        smallest_det = min(smallest_det, abs(np.linalg.det(entries)) / np.max(np.abs(entries)) ** d)
        smallest_gap = min(smallest_gap, common_zero_gap(ev, _off_poles(rng, (-2.5, 4), (-3, 3))))
    passed = smallest_det > 1e-10 and smallest_gap > 1e-10
    return passed, "min scaled determinant {:.3g}, min gap {:.3g}".format(smallest_det, smallest_gap)


def _reduction(rng, cfg, samples):
    worst = 0.0
    for _ in range(samples):
        d = int(rng.integers(1, 5))
        P0 = Potential.random(rng, d)
        ev = OmegaEvaluator(P0, cfg)
        Q = Poly(rng.normal(size=int(rng.integers(1, 7))) + 1j * rng.normal(size=1))
        s = complex(rng.uniform(0.5, 3), rng.uniform(-1, 1))
        z = (0.2 + 1.8 * rng.random()) * cmath.exp(2j * math.pi * rng.random())
        red = reduce_tpoly(P0, Q)
        # int t^s t^j e^P0 = W(s+j+1, z)
        direct = sum((q * ev.incomplete_quad(s + j + 1, z) for j, q in enumerate(Q.coeffs)), 0j)
        worst = max(worst, abs(eval_reduction(red, ev, s, z) - direct) / (1 + abs(direct)))
    return worst <= 1e-7, "max relative deviation {:.3g}".format(worst)


def _solver(rng, cfg, samples):
    worst = 0.0
    for _ in range(samples):
        d = int(rng.integers(1, 4))
        ev = OmegaEvaluator(Potential.random(rng, d), cfg)
        c = rng.normal(size=d) + 1j * rng.normal(size=d)
        v = [sum(c[k] * ev.omega(k, l + 1) for k in range(d)) for l in range(d)]
        spec = solve_samples(ev, 0, v)
        worst = max(worst, float(np.max(np.abs(np.array(spec.c) - c)) / np.max(np.abs(c))))
        s = complex(rng.uniform(0.5, 4), rng.uniform(-2, 2))
        direct = sum(c[k] * ev.omega(k, s) for k in range(d))
        worst = max(worst, abs(eval_solution(spec, ev, s) - direct) / abs(direct))
    return worst <= 1e-6, "max relative deviation {:.3g}".format(worst)


def _conjugation(rng, cfg, samples):
    worst = 0.0
    for d in (2, 3):
        ev = OmegaEvaluator(Potential.random(rng, d, real=True), cfg)
        for _ in range(samples):
            s = complex(rng.uniform(0.5, 4), rng.uniform(-3, 3))
            for k in range(d):
                worst = max(worst, ev.conjugation_defect(k, s))
    return worst <= 1e-9, "max deviation {:.3g}".format(worst)


def _growth(rng, cfg, samples):
    worst = 0.0
    for d in (2, 3):
        ev = OmegaEvaluator(Potential.random(rng, d, real=True), cfg)
        for tau in np.linspace(2, 20, max(samples, 2)):
            for k in range(d):
                for sigma in (1, d):
                    worst = max(worst, ev.growth_ratio(k, sigma, tau))
    return worst <= 10, "max growth ratio {:.3g}".format(worst)


def _periodic_solution(rng, cfg, samples):
    worst = 0.0
    smallest_gap = math.inf
    for d in (1, 2, 3):
        ev = OmegaEvaluator(Potential.random(rng, d), cfg)
        for _ in range(samples):
            s = _off_poles(rng, (-2, 4), (-2, 2))
            worst = max(worst, ev.periodic_residual(0, s))
        # a fit by constant coefficients agrees on s0 + 1..s0 + d but not half way
        s0 = complex(rng.uniform(0, 1), rng.uniform(-0.5, 0.5))

        def periodic(x):
            return cmath.exp(2j * math.pi * x) * ev.omega(0, x)

        spec = solve_samples(ev, s0, [periodic(s0 + l + 1) for l in range(d)])
        expected = periodic(s0 + 1.5)
        smallest_gap = min(smallest_gap, abs(eval_solution(spec, ev, s0 + 1.5) - expected) / abs(expected))
    passed = worst <= 1e-8 and smallest_gap > 1
    return passed, "max residual {:.3g}, min gap to the constant span {:.3g}".format(worst, smallest_gap)


def _truncation(rng, cfg, samples):
    eps = cfg.tol * TAIL_FRACTION
    worst = 0.0
    for _ in range(samples):
        d = int(rng.integers(1, 5))
        P0 = Potential.random(rng, d)
        k = int(rng.integers(d))
        sigma = rng.uniform(0.5, 4)
        R = truncation_radius(P0, k, sigma, eps)
        w = P0.omega_k(k)
        tail = integrate_segment(
            lambda u: np.exp((sigma - 1) * np.log(u) + P0(w * u)), R, 2 * R, cfg, atol=eps * 1e-3)
        worst = max(worst, abs(tail.value) / eps)
    return worst <= 2, "max tail over budget {:.3g}".format(worst)


def _divisibility(rng, cfg, samples):
    worst = 0.0
    for d, n0 in ((4, 2), (6, 3), (6, 2)):
        a = [0j] * (d - 1)
        for k in range(n0, d, n0):
            a[k - 1] = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        lambdas = np.abs(exp_series(Potential(d, tuple(a)), 40).lambdas)
        off = [lambdas[n] for n in range(len(lambdas)) if n % n0]
        worst = max(worst, max(off) / np.max(lambdas))
    # the coefficient of W(s, z) always carries the factor s
    for _ in range(samples):
        P0 = Potential.random(rng, int(rng.integers(2, 5)))
        Q = Poly(rng.normal(size=int(rng.integers(1, 8))))
        c0 = reduce_tpoly(P0, Q).c[0]
        worst = max(worst, abs(c0(0)) / max([1.0] + [abs(x) for x in c0.coeffs]))
    return worst <= 1e-14, "max off-lattice coefficient {:.3g}".format(worst)


def _path_additivity(rng, cfg, samples):
    worst = 0.0
    for _ in range(samples):
        P0 = Potential.random(rng, int(rng.integers(1, 5)))
        a, b, c = (complex(rng.normal(), rng.normal()) for _ in range(3))

        def f(t):
            return np.exp(P0(t))

        first = integrate_segment(f, a, b, cfg).value
        second = integrate_segment(f, b, c, cfg).value
        whole = integrate_segment(f, a, c, cfg).value
        scale = max(abs(whole), abs(first) + abs(second), 1.0)
        worst = max(worst, abs(first + second - whole) / scale)
    return worst <= 10 * cfg.tol, "max defect {:.3g}".format(worst)


CHECKS = {
    "gamma_regression": _gamma_regression,
    "functional_equation": _functional_equation,
    "residues": _residues,
    "divisibility": _divisibility,
    "mittag_leffler": _mittag_leffler,
    "truncation_radius": _truncation,
    "path_additivity": _path_additivity,
    "determinant_closed_form": _closed_form,
    "non_vanishing": _non_vanishing,
    "reduction": _reduction,
    "solver_roundtrip": _solver,
    "conjugation": _conjugation,
    "growth": _growth,
    "periodic_solution": _periodic_solution,
}


def run_selftest(samples=5, seed=0, cfg=None):
    """
    Runs every check with `samples` random points

    :param samples: sample count per check
    :param seed: seed of the random generator
    :param cfg: a QuadConfig
    :return: a DataFrame with the columns check, passed and detail
    """
    cfg = cfg or QuadConfig()
    rng = np.random.default_rng(seed)
    rows = []
    for name, check in CHECKS.items():
        try:
            passed, detail = check(rng, cfg, samples)
        except OmegaError as e:
            passed, detail = False, "{}: {}".format(type(e).__name__, e)
        if not passed:
            logger.warning("selftest {} failed: {}".format(name, detail))
        rows.append({"check": name, "passed": bool(passed), "detail": detail})
    return pd.DataFrame(rows, columns=["check", "passed", "detail"])
