"""
Integration paths made of segments, circular arcs and rays. Integrands take the point t
and the branch of log t that is continuous along the path, so that t^s can be
formed as exp(s*log_t) on any sheet.
"""
import cmath
import math
from abc import ABC, abstractmethod

import numpy as np

from omegaperiods.errors import InputError
from omegaperiods.quadrature import Estimate, QuadConfig, TAIL_FRACTION, integrate_segment, truncation_radius

CONTINUITY_TOL = 1e-12


class Path(ABC):
    """
    A piece of an integration contour
    """

    @property
    @abstractmethod
    def start(self):
        pass

    @property
    @abstractmethod
    def end(self):
        pass

    @abstractmethod
    def integrate(self, f, cfg=None, atol=0.0):
        """
        Integrates f(t, log_t) dt along the path

        :param f: vectorized integrand
        :param cfg: a QuadConfig
        :param atol: absolute error accepted in any case
        :return: an Estimate
        """
        pass

    def __str__(self):
        return "{}({} -> {})".format(type(self).__name__, self.start, self.end)


class Segment(Path):
    """
    Straight segment from a to b, not passing through 0. log t is continued from
    log_a (principal log of a by default) as log_a + Log(t/a).
    """

    def __init__(self, a, b, log_a=None):
        a, b = complex(a), complex(b)
        if a == 0 or b == 0:
            raise InputError("A segment can not start or end at 0")
        direction = b - a
        if direction != 0:
            # closest point of the segment to the origin
            x = min(max(-(a * direction.conjugate()).real / abs(direction) ** 2, 0.0), 1.0)
            if abs(a + x * direction) == 0:
                raise InputError("Segment [{}, {}] passes through 0".format(a, b))
        self.a = a
        self.b = b
        self.log_a = cmath.log(a) if log_a is None else complex(log_a)

    @property
    def start(self):
        return self.a

    @property
    def end(self):
        return self.b

    def integrate(self, f, cfg=None, atol=0.0):
        def integrand(t):
            return f(t, self.log_a + np.log(t / self.a))

        return integrate_segment(integrand, self.a, self.b, cfg, atol)


class Arc(Path):
    """
    Circular arc t = radius*exp(i*theta), theta going from theta0 to theta1.
    log t = log(radius) + i*theta, so the branch follows theta.
    """

    def __init__(self, radius, theta0, theta1):
        if radius <= 0:
            raise InputError("Arc radius must be positive, got {}".format(radius))
        self.radius = float(radius)
        self.theta0 = float(theta0)
        self.theta1 = float(theta1)

    @property
    def start(self):
        return self.radius * cmath.exp(1j * self.theta0)

    @property
    def end(self):
        return self.radius * cmath.exp(1j * self.theta1)

    def integrate(self, f, cfg=None, atol=0.0):
        log_r = math.log(self.radius)

        def integrand(theta):
            theta = np.real(theta)
            log_t = log_r + 1j * theta
            t = np.exp(log_t)
            return f(t, log_t) * 1j * t

        return integrate_segment(integrand, self.theta0, self.theta1, cfg, atol)


class Ray(Path):
    """
    Piece of the ray of argument `angle`, from modulus r0 to r1. The ray may be
    closed with `to_infinity`, which truncates it where the integrand tail is negligible.
    """

    def __init__(self, angle, r0, r1, tail=0.0):
        if not 0 < r0 <= r1:
            raise InputError("Ray bounds must satisfy 0 < r0 <= r1, got {} and {}".format(r0, r1))
        self.angle = float(angle)
        self.r0 = float(r0)
        self.r1 = float(r1)
        self.tail = float(tail)

    @classmethod
    def to_infinity(cls, P0, k, sigma, cfg=None, r0=1.0):
        """
        The ray of exp(P0) from r0 to infinity in direction w_k, truncated for an
        integrand t^(s-1) exp(P0(t)) with Re s = sigma

        :param P0: the potential
        :param k: ray index
        :param sigma: Re s
        :param cfg: a QuadConfig
        :param r0: starting modulus
        """
        cfg = cfg or QuadConfig()
        eps = cfg.tol * TAIL_FRACTION
        R = max(truncation_radius(P0, k, sigma, eps), r0)
        return cls(P0.ray_angle(k), r0, R, tail=eps)

    @property
    def start(self):
        return self.r0 * cmath.exp(1j * self.angle)

    @property
    def end(self):
        return self.r1 * cmath.exp(1j * self.angle)

    def integrate(self, f, cfg=None, atol=0.0):
        direction = cmath.exp(1j * self.angle)

        def integrand(u):
            u = np.real(u)
            return f(direction * u, np.log(u) + 1j * self.angle) * direction

        return integrate_segment(integrand, self.r0, self.r1, cfg, atol) + Estimate(0j, self.tail)


class Contour(object):
    """
    Chain of paths, each one starting where the previous one ends
    """

    def __init__(self, pieces):
        self.pieces = list(pieces)
        if not self.pieces:
            raise InputError("A contour needs at least one piece")
        for prev, curr in zip(self.pieces, self.pieces[1:]):
            gap = abs(prev.end - curr.start)
            if gap > CONTINUITY_TOL * max(1.0, abs(prev.end)):
                raise InputError("Contour is not continuous between {} and {}".format(prev, curr))

    @property
    def start(self):
        return self.pieces[0].start

    @property
    def end(self):
        return self.pieces[-1].end

    def integrate(self, f, cfg=None, atol=0.0):
        total = Estimate(0j, 0.0)
        for piece in self.pieces:
            total = total + piece.integrate(f, cfg, atol / len(self.pieces))
        return total

    def __str__(self):
        return " + ".join(str(p) for p in self.pieces)
