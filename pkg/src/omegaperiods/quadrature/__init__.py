import logging
from dataclasses import dataclass, fields
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import bisect
from scipy.special import gamma as sp_gamma, gammaincc

from omegaperiods.errors import InputError, ToleranceNotMet

logger = logging.getLogger(__name__)

LOW_ORDER = 10
HIGH_ORDER = 20
MAX_PANELS = 20000
# absolute tail budget of a ray, relative to cfg.tol
TAIL_FRACTION = 1e-8
# error accepted relative to the integral of |f|, as a fraction of tol
CANCELLATION = 1e-3
ROUNDING_FLOOR = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class QuadConfig:
    """
    Numerical configuration shared by quadrature, series summation and pole detection

    :param tol: target relative error, 0 < tol < 1
    :param max_depth: maximum bisection depth of a quadrature panel
    :param pole_tol: distance to -n below which a point is treated as the pole -n
    :param series_max: maximum number of series terms
    """
    tol: float = 1e-10
    max_depth: int = 40
    pole_tol: float = 1e-8
    series_max: int = 10000

    def __post_init__(self):
        if not 0 < self.tol < 1:
            raise InputError("tol must lie in (0, 1), got {}".format(self.tol))
        if self.max_depth < 1 or self.series_max < 1:
            raise InputError("max_depth and series_max must be positive")
        if self.pole_tol <= 0:
            raise InputError("pole_tol must be positive, got {}".format(self.pole_tol))

    @classmethod
    def from_dict(cls, config):
        known = {f.name for f in fields(cls)}
        unknown = set(config) - known
        if unknown:
            raise InputError("Unknown quadrature settings: {}".format(", ".join(sorted(unknown))))
        return cls(**config)


@dataclass(frozen=True)
class Estimate:
    """
    A computed value together with its estimated absolute error
    """
    value: complex
    error: float = 0.0

    def __add__(self, other):
        if not isinstance(other, Estimate):
            other = Estimate(complex(other))
        return Estimate(self.value + other.value, self.error + other.error)

    __radd__ = __add__

    def __neg__(self):
        return Estimate(-self.value, self.error)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, factor):
        return Estimate(self.value * factor, self.error * abs(factor))


@lru_cache(maxsize=None)
def _gauss_legendre(n):
    return leggauss(n)


def _evaluate_panels(f, a, b, panels):
    """
    Evaluates the low and high order rules on every panel with one call of f per rule
    """
    left = np.array([p[0] for p in panels])
    right = np.array([p[1] for p in panels])
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    estimates = []
    for order in (LOW_ORDER, HIGH_ORDER):
        x, w = _gauss_legendre(order)
        u = mid[:, None] + half[:, None] * x[None, :]
        values = np.asarray(f(a + (b - a) * u.ravel()), dtype=complex).reshape(u.shape)
        if not np.all(np.isfinite(values)):
            raise ToleranceNotMet("Integrand is not finite on the segment [{}, {}]".format(a, b))
        estimates.append((b - a) * half * (values @ w))
    low, high = estimates
    # integral of |f| on each panel, with the high order rule
    magnitude = abs(b - a) * half * (np.abs(values) @ w)
    return [(p[0], p[1], p[2], v, abs(v - lo), m) for p, v, lo, m in zip(panels, high, low, magnitude)]


def cancellation_floor(cfg, magnitude):
    """
    Absolute error accepted when the integral cancels: a fraction of the integral
    of |f|, never below what rounding leaves of it
    """
    return max(cfg.tol * CANCELLATION, ROUNDING_FLOOR) * magnitude


def integrate_segment(f, a, b, cfg=None, atol=0.0):
    """
    Integrates f over the straight segment from a to b by adaptive bisection.
    Each panel is integrated with 10 and 20 Gauss-Legendre nodes, their
    difference being the panel error estimate. The target error is tol times
    |integral of f|, floored by `cancellation_floor` of the integral of |f| and by atol.

    :param f: vectorized integrand, takes a numpy array of points of [a, b]
    :param a: start point
    :param b: end point
    :param cfg: a QuadConfig
    :param atol: absolute error accepted in any case
    :return: an Estimate
    """
    cfg = cfg or QuadConfig()
    a, b = complex(a), complex(b)
    if a == b:
        return Estimate(0j, 0.0)
    done = []
    pending = [(0.0, 1.0, 0)]
    while True:
        done = sorted(done + _evaluate_panels(f, a, b, pending), key=lambda p: p[0])
        total = complex(sum(p[3] for p in done))
        error = float(sum(p[4] for p in done))
        magnitude = float(sum(p[5] for p in done))
        target = max(cfg.tol * abs(total), cancellation_floor(cfg, magnitude), atol)
        if error <= target:
            logger.debug("segment [{}, {}]: {} panels, error {:.3g}".format(a, b, len(done), error))
            return Estimate(total, error)
        split = [p for p in done if p[4] > target * (p[1] - p[0]) and p[2] < cfg.max_depth]
        if not split:
            candidates = [p for p in done if p[2] < cfg.max_depth]
            if not candidates:
                raise ToleranceNotMet(
                    "Quadrature on [{}, {}] reached max_depth {} with error {:.3g}".format(
                        a, b, cfg.max_depth, error),
                    Estimate(total, error))
            split = [max(candidates, key=lambda p: p[4])]
        if len(done) + len(split) > MAX_PANELS:
            raise ToleranceNotMet(
                "Quadrature on [{}, {}] needs more than {} panels, error {:.3g}".format(a, b, MAX_PANELS, error),
                Estimate(total, error))
        split_left = {p[0] for p in split}
        done = [p for p in done if p[0] not in split_left]
        pending = []
        for left, right, depth, _, _, _ in split:
            mid = 0.5 * (left + right)
            pending += [(left, mid, depth + 1), (mid, right, depth + 1)]


def _tail_bound(R, d, sigma, rate):
    # int_R^inf u^(sigma-1) exp(-rate*u^d/d) du through the substitution v = rate*u^d/d
    a = sigma / d
    return (d / rate) ** a / d * sp_gamma(a) * gammaincc(a, rate * R ** d / d)


def truncation_radius(P0, k, sigma, eps):
    """
    Radius R beyond which the ray integral of |u^(s-1) exp(P0(w_k u))| is below eps.
    For u >= R0 = max(1, 2d*sum|a_j|) we have Re P0(w_k u) <= -u^d/(2d) (d >= 2) and
    Re P0(u) = -u (d = 1); the tail of the comparison integral is an incomplete Gamma.

    :param P0: the potential
    :param k: ray index
    :param sigma: Re s
    :param eps: tail budget, eps > 0
    :return: the radius R >= 1
    """
    if eps <= 0:
        raise InputError("Tail budget must be positive, got {}".format(eps))
    if not 0 <= k < P0.d:
        raise InputError("Ray index {} out of range for degree {}".format(k, P0.d))
    d = P0.d
    rate = 1.0 if d == 1 else 0.5
    r0 = max(1.0, 2 * d * sum(abs(c) for c in P0.a))
    # u^(sigma-1) <= 1 on u >= 1 when sigma < 1
    sigma = max(float(sigma), 1.0)

    def excess(R):
        return _tail_bound(R, d, sigma, rate) - eps

    if excess(r0) <= 0:
        return r0
    hi = 2 * r0
    while excess(hi) > 0:
        hi *= 2
    if excess(hi) == 0:
        return hi
    xtol = 1e-10 * hi
    return bisect(excess, hi / 2, hi, xtol=xtol) + 2 * xtol


def integrate_ray(f, k, P0, sigma, cfg=None, atol=0.0):
    """
    Integrates f(u), u^(s-1) exp(P0(w_k u)) possibly times a polynomial, over [1, +inf)

    :param f: vectorized integrand on the positive real axis
    :param k: ray index
    :param P0: the potential
    :param sigma: Re s, drives the truncation radius
    :param cfg: a QuadConfig
    :param atol: absolute error accepted on the truncated ray
    :return: an Estimate, the truncation budget included in its error
    """
    cfg = cfg or QuadConfig()
    eps = cfg.tol * TAIL_FRACTION
    R = truncation_radius(P0, k, sigma, eps)
    logger.debug("ray {} of {}: truncation radius {:.6g}".format(k, P0, R))
    return integrate_segment(f, 1.0, R, cfg, atol) + Estimate(0j, eps)
