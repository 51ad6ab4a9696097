import cmath
import logging
import math
import threading
from dataclasses import dataclass

import numpy as np

from omegaperiods.algebra import exp_series, extend_series
from omegaperiods.errors import InputError, PoleProximityError, ToleranceNotMet
from omegaperiods.gamma_ref import complex_gamma
from omegaperiods.quadrature import Estimate, QuadConfig, TAIL_FRACTION, integrate_ray, integrate_segment
from omegaperiods.quadrature.paths import Arc, Ray, Segment

logger = logging.getLogger(__name__)

INITIAL_ORDER = 64
# consecutive negligible terms closing a series
STOP_RUN = 10
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class PoleInfo:
    """
    Report of a pole of Omega_k at s = -n, its residue being lambda_n
    """
    n: int
    residue: complex


def monomial_omega(d, k, s):
    """
    Omega_k(s) of the monomial potential -t^d/d: w^(ks) d^(s/d-1) Gamma(s/d)
    """
    s = complex(s)
    return cmath.exp(2j * math.pi * k * s / d) * cmath.exp((s / d - 1) * math.log(d)) * complex_gamma(s / d)


def _output(estimate, full_output):
    return estimate if full_output else estimate.value


class OmegaEvaluator(object):
    """
    Evaluates the Omega functions of a potential P0 and its Incomplete Omega function.
    The Taylor coefficients of exp(P0) are cached and extended on demand; the cache
    is shared by every thread using the evaluator.

    :param potential: the Potential
    :param cfg: a QuadConfig
    """

    def __init__(self, potential, cfg=None):
        self.potential = potential
        self.cfg = cfg or QuadConfig()
        self._series = exp_series(potential, min(INITIAL_ORDER, self.cfg.series_max))
        self._lock = threading.Lock()

    @property
    def series(self):
        return self._series

    @property
    def _path_atol(self):
        # a contour piece may be as inaccurate as the truncated tail of a ray
        return self.cfg.tol * TAIL_FRACTION

    def lambdas(self, N):
        """
        The ExpSeries up to at least order N
        """
        series = self._series
        if N <= series.N:
            return series
        with self._lock:
            if N > self._series.N:
                self._series = extend_series(self.potential, self._series, N)
            return self._series

    def _check_ray(self, k):
        if int(k) != k or not 0 <= k < self.potential.d:
            raise InputError("Ray index {} out of range for degree {}".format(k, self.potential.d))
        return int(k)

    def _pole_index(self, s):
        n = int(round(-s.real))
        if n >= 0 and abs(s + n) < self.cfg.pole_tol:
            return n
        return None

    def _sum_series(self, s, x):
        """
        sum_n lambda_n x^n / (s+n) for |x| <= 1, closed after STOP_RUN consecutive
        terms below tol times the partial sum
        """
        N = min(INITIAL_ORDER, self.cfg.series_max)
        min_terms = 2 * self.potential.d + STOP_RUN
        while True:
            lambdas = np.array(self.lambdas(N).lambdas[:N + 1])
            n = np.arange(N + 1)
            terms = lambdas * np.power(complex(x), n) / (s + n)
            partial = np.cumsum(terms)
            small = np.abs(terms) <= self.cfg.tol * np.abs(partial)
            runs = np.convolve(small.astype(int), np.ones(STOP_RUN, dtype=int), mode="valid")
            closed = np.nonzero((runs == STOP_RUN) & (np.arange(len(runs)) + STOP_RUN > min_terms))[0]
            if len(closed):
                stop = closed[0] + STOP_RUN - 1
                error = STOP_RUN * abs(terms[stop]) + EPS * float(np.sum(np.abs(terms[:stop + 1])))
                logger.debug("series at s={} closed after {} terms".format(s, stop + 1))
                return Estimate(complex(partial[stop]), error)
            if N >= self.cfg.series_max:
                raise ToleranceNotMet(
                    "Series at s={} not converged after {} terms".format(s, N + 1),
                    Estimate(complex(partial[-1]), float(abs(terms[-1]))))
            N = min(2 * N, self.cfg.series_max)

    def omega_pos(self, k, s, full_output=False):
        """
        Omega_k(s) for Re s > 0, as
        w_k^s [sum_n lambda_n w_k^n/(s+n) + int_1^inf u^(s-1) exp(P0(w_k u)) du]

        :param k: ray index
        :param s: the point, Re s > 0
        :param full_output: return an Estimate instead of the value
        """
        k = self._check_ray(k)
        s = complex(s)
        if s.real <= 0:
            raise InputError("omega_pos needs Re s > 0, got {}".format(s))
        P0 = self.potential
        w = P0.omega_k(k)

        def f(u):
            return np.exp((s - 1) * np.log(u) + P0(w * u))

        total = self._sum_series(s, w) + integrate_ray(f, k, P0, s.real, self.cfg)
        return _output(total.scaled(cmath.exp(2j * math.pi * k * s / P0.d)), full_output)

    def omega(self, k, s, full_output=False):
        """
        Omega_k(s) on the whole plane; left of Re s = 0 the functional equation
        s*W(s) = W(s+d) + sum_{l<d} alpha_l W(s+l) is run downwards.

        :param k: ray index
        :param s: the point
        :param full_output: return an Estimate instead of the value
        :return: the value, or a PoleInfo when s lies within pole_tol of a pole
        """
        k = self._check_ray(k)
        s = complex(s)
        n = self._pole_index(s)
        if n is not None:
            return PoleInfo(n, self.residue(n))
        if s.real > 0:
            return self.omega_pos(k, s, full_output)
        d = self.potential.d
        alpha = self.potential.alpha
        m = int(math.floor(-s.real)) + 1
        values = {j: self.omega_pos(k, s + j, full_output=True) for j in range(m, m + d)}
        for j in range(m - 1, -1, -1):
            value = values[j + d].value
            error = values[j + d].error
            for l in range(1, d):
                value += alpha[l - 1] * values[j + l].value
                error += abs(alpha[l - 1]) * values[j + l].error
            values[j] = Estimate(value / (s + j), error / abs(s + j))
        logger.debug("continuation of Omega_{} to s={}: {} steps".format(k, s, m))
        return _output(values[0], full_output)

    def residue(self, n):
        """
        Residue lambda_n of every Omega_k at s = -n
        """
        if int(n) != n or n < 0:
            raise InputError("Pole index must be a non negative integer, got {}".format(n))
        return self.lambdas(int(n))[int(n)]

    def _check_pole(self, s):
        n = self._pole_index(s)
        if n is not None:
            raise PoleProximityError("s={} lies within {} of the pole {}".format(s, self.cfg.pole_tol, -n), n)

    def _tail_integrand(self, s):
        P0 = self.potential

        def f(t, log_t):
            return np.exp((s - 1) * log_t + P0(t))

        return f

    def mittag_leffler(self, k, s, N=None, full_output=False):
        """
        Omega_k(s) = sum_{n<=N} lambda_n/(s+n) + int_1^{inf w_k} t^(s-1) exp(P0(t)) dt,
        the integral running along the unit circle from 1 to w_k then along the ray

        :param k: ray index
        :param s: the point, off the poles
        :param N: order of the partial sum, adaptive when None
        :param full_output: return an Estimate instead of the value
        """
        k = self._check_ray(k)
        s = complex(s)
        self._check_pole(s)
        if N is None:
            partial = self._sum_series(s, 1.0)
        else:
            if N < 0:
                raise InputError("Order N must be non negative, got {}".format(N))
            lambdas = np.array(self.lambdas(N).lambdas[:N + 1])
            terms = lambdas / (s + np.arange(N + 1))
            partial = Estimate(complex(np.sum(terms)), EPS * float(np.sum(np.abs(terms))))
        f = self._tail_integrand(s)
        P0 = self.potential
        arc = Arc(1.0, 0.0, P0.ray_angle(k)).integrate(f, self.cfg, self._path_atol)
        ray = Ray.to_infinity(P0, k, s.real, self.cfg).integrate(f, self.cfg, self._path_atol)
        return _output(partial + arc + ray, full_output)

    def omega_diff(self, k, l, s, full_output=False):
        """
        The entire function Omega_k(s) - Omega_l(s), integrated along the ray of w_l
        backwards, the unit circle from w_l to w_k and the ray of w_k

        :param k: ray index
        :param l: ray index, l != k
        :param s: any point
        :param full_output: return an Estimate instead of the value
        """
        k = self._check_ray(k)
        l = self._check_ray(l)
        if k == l:
            raise InputError("omega_diff needs two distinct rays, got {} twice".format(k))
        s = complex(s)
        P0 = self.potential
        f = self._tail_integrand(s)
        ray_l = Ray.to_infinity(P0, l, s.real, self.cfg).integrate(f, self.cfg, self._path_atol)
        arc = Arc(1.0, P0.ray_angle(l), P0.ray_angle(k)).integrate(f, self.cfg, self._path_atol)
        ray_k = Ray.to_infinity(P0, k, s.real, self.cfg).integrate(f, self.cfg, self._path_atol)
        return _output(ray_k + arc - ray_l, full_output)

    def incomplete(self, s, z, full_output=False):
        """
        Incomplete Omega function int_0^z t^(s-1) exp(P0(t)) dt with the principal
        branch of arg z. The series covers |t| <= 1, a radial segment the rest.

        :param s: the point, Re s > 0
        :param z: the end point, z != 0
        :param full_output: return an Estimate instead of the value
        """
        s, z = complex(s), complex(z)
        if s.real <= 0:
            raise InputError("The incomplete Omega function needs Re s > 0, got {}".format(s))
        if z == 0:
            raise InputError("The end point z must be non zero")
        log_z = cmath.log(z)
        if abs(z) <= 1:
            series = self._sum_series(s, z)
            return _output(series.scaled(cmath.exp(s * log_z)), full_output)
        z_unit = z / abs(z)
        log_unit = 1j * log_z.imag
        series = self._sum_series(s, z_unit).scaled(cmath.exp(s * log_unit))
        radial = Segment(z_unit, z, log_unit).integrate(self._tail_integrand(s), self.cfg)
        return _output(series + radial, full_output)

    def incomplete_quad(self, s, z, full_output=False):
        """
        Direct quadrature of the incomplete Omega function on [0, z], through
        t = z v^(1/sigma) which leaves the integrand z^s/sigma v^(i tau/sigma) exp(P0(t))
        """
        s, z = complex(s), complex(z)
        if s.real <= 0.1:
            raise InputError("incomplete_quad needs Re s > 0.1, got {}".format(s))
        if z == 0:
            raise InputError("The end point z must be non zero")
        sigma = s.real
        P0 = self.potential

        def g(v):
            v = np.real(v)
            return np.exp(1j * s.imag / sigma * np.log(v) + P0(z * v ** (1 / sigma)))

        integral = integrate_segment(g, 0.0, 1.0, self.cfg)
        return _output(integral.scaled(cmath.exp(s * cmath.log(z)) / sigma), full_output)

    def _value(self, k, s):
        value = self.omega(k, s)
        if isinstance(value, PoleInfo):
            raise PoleProximityError("s={} lies within {} of the pole {}".format(
                s, self.cfg.pole_tol, -value.n), value.n)
        return value

    def functional_residual(self, k, s):
        """
        Relative defect |LHS - RHS| / max(|LHS|, |RHS|, 1) of
        W(s+d) + sum_{l<d} alpha_l W(s+l) = s W(s) with W = Omega_k
        """
        k = self._check_ray(k)
        return self._equation_residual(lambda x: self._value(k, x), s)

    def periodic_residual(self, k, s):
        """
        Defect of the functional equation for e^(2 pi i s) Omega_k(s). The factor has
        period 1, so this is again a solution, though not a combination of the
        Omega_k with constant coefficients.
        """
        k = self._check_ray(k)
        return self._equation_residual(lambda x: cmath.exp(2j * math.pi * x) * self._value(k, x), s)

    def _equation_residual(self, W, s):
        s = complex(s)
        self._check_pole(s)
        d = self.potential.d
        alpha = self.potential.alpha
        lhs = W(s + d)
        for l in range(1, d):
            lhs += alpha[l - 1] * W(s + l)
        rhs = s * W(s)
        return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)

    def conjugation_defect(self, k, s):
        """
        Relative defect of conj(Omega_k(conj s)) = e^(-2 pi i s) Omega_(d-k)(s), k != 0,
        and conj(Omega_0(conj s)) = Omega_0(s); only a real potential has this symmetry
        """
        k = self._check_ray(k)
        if not self.potential.is_real:
            raise InputError("Conjugation symmetry needs a real potential, got {}".format(self.potential))
        s = complex(s)
        self._check_pole(s)
        d = self.potential.d
        mirrored = self._value(k, s.conjugate()).conjugate()
        expected = self._value((d - k) % d, s)
        if k != 0:
            expected *= cmath.exp(-2j * math.pi * s)
        return abs(mirrored - expected) / max(abs(expected), 1.0)

    def growth_ratio(self, k, sigma, tau):
        """
        |Omega_k(sigma + i tau)| e^(2 pi k tau/d) over its value at tau = 0. On the
        strip 1 <= sigma <= d it stays bounded as tau grows.

        :param k: ray index
        :param sigma: Re s, positive
        :param tau: Im s
        """
        k = self._check_ray(k)
        if sigma <= 0:
            raise InputError("growth_ratio needs a positive real part, got {}".format(sigma))
        d = self.potential.d
        base = abs(self.omega_pos(k, sigma))
        value = abs(self.omega_pos(k, complex(sigma, tau)))
        return value * math.exp(2 * math.pi * k * tau / d) / base
