import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from omegaperiods.algebra.poly import Poly
from omegaperiods.errors import InputError
from omegaperiods.utils import parse_complex, format_complex


@dataclass(frozen=True)
class Potential:
    """
    Normalized potential P0(t) = -t^d/d + sum_{k=1}^{d-1} a_k t^k

    :param d: the degree, d >= 1
    :param a: the free coefficients a_1..a_{d-1}; missing trailing ones are 0
    """
    d: int
    a: tuple = ()

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise InputError("Potential degree must be a positive integer, got {}".format(self.d))
        a = [complex(c) for c in self.a]
        if len(a) > self.d - 1:
            raise InputError("A degree {} potential has {} free coefficients, got {}".format(
                self.d, self.d - 1, len(a)))
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in a):
            raise InputError("Potential coefficients must be finite")
        a += [0j] * (self.d - 1 - len(a))
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "a", tuple(a))

    @classmethod
    def parse(cls, text):
        """
        Parses the text form `d=<int>;a1=<cplx>;a2=<cplx>;...`
        """
        fields = {}
        for item in str(text).split(";"):
            if not item.strip():
                continue
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or not key:
                raise InputError("Invalid potential field '{}'".format(item))
            if key in fields:
                raise InputError("Duplicated potential field '{}'".format(key))
            fields[key] = value.strip()
        if "d" not in fields:
            raise InputError("Potential '{}' has no degree field d".format(text))
        try:
            d = int(fields.pop("d"))
        except ValueError:
            raise InputError("Potential degree must be an integer in '{}'".format(text))
        if d < 1:
            raise InputError("Potential degree must be positive, got {}".format(d))
        a = [0j] * (d - 1)
        for key, value in fields.items():
            if not key.startswith("a") or not key[1:].isdigit():
                raise InputError("Unknown potential field '{}'".format(key))
            k = int(key[1:])
            if not 1 <= k <= d - 1:
                raise InputError("Coefficient {} out of range for degree {}".format(key, d))
            a[k - 1] = parse_complex(value)
        return cls(d, tuple(a))

    @classmethod
    def random(cls, rng, d, radius=0.5, real=False):
        """
        Samples a potential with |a_k| <= radius

        :param rng: a numpy Generator
        :param d: the degree
        :param radius: bound on the modulus of the coefficients
        :param real: sample real coefficients only
        """
        modulus = radius * rng.random(d - 1)
        if real:
            a = modulus * rng.choice([-1.0, 1.0], size=d - 1)
        else:
            a = modulus * np.exp(2j * np.pi * rng.random(d - 1))
        return cls(d, tuple(a))

    def __str__(self):
        fields = ["d={}".format(self.d)]
        fields += ["a{}={}".format(k, format_complex(c)) for k, c in enumerate(self.a, start=1) if c != 0]
        return ";".join(fields)

    @property
    def coefficients(self):
        """
        a_0..a_d with a_0 = 0 and a_d = -1/d
        """
        return (0j,) + self.a + (complex(-1.0 / self.d),)

    @property
    def poly(self):
        return Poly(self.coefficients)

    @property
    def derivative(self):
        """
        P0'(t); its leading coefficient is exactly -1
        """
        coeffs = [k * a_k for k, a_k in enumerate(self.a, start=1)] + [-1.0]
        return Poly(coeffs)

    @property
    def omega(self):
        return cmath.exp(2j * math.pi / self.d)

    def omega_k(self, k):
        return cmath.exp(2j * math.pi * k / self.d)

    def ray_angle(self, k):
        """
        Argument 2*pi*k/d of the k-th ray, in [0, 2*pi)
        """
        return 2 * math.pi * (k % self.d) / self.d

    @property
    def alpha(self):
        """
        alpha_1..alpha_d of the functional equation, alpha_l = -l*a_l and alpha_d = 1
        """
        return tuple(-l * a_l for l, a_l in enumerate(self.a, start=1)) + (1 + 0j,)

    @property
    def is_real(self):
        return all(c.imag == 0 for c in self.a)

    @property
    def is_monomial(self):
        return all(c == 0 for c in self.a)

    def conjugate(self):
        return Potential(self.d, tuple(c.conjugate() for c in self.a))

    def __call__(self, t):
        return npoly.polyval(t, np.array(self.coefficients))


@dataclass(frozen=True)
class NormalizedDFE:
    """
    A raw difference equation s*f(s) = sum alpha_k f(s+k) rewritten as the
    canonical equation of `potential` through f(s) = scale^s * h(s)
    """
    potential: Potential
    scale: complex

    def canonical_alpha(self):
        return self.potential.alpha

    def to_canonical(self, s, f_value):
        """
        h(s) = scale^(-s) f(s)
        """
        return cmath.exp(-s * cmath.log(self.scale)) * f_value

    def to_raw(self, s, h_value):
        """
        f(s) = scale^s h(s)
        """
        return cmath.exp(s * cmath.log(self.scale)) * h_value


def normalize_dfe(alpha):
    """
    Normalizes s*f(s) = sum_{k=1}^{d} alpha_k f(s+k) to the canonical equation

    :param alpha: the coefficients alpha_1..alpha_d, alpha_d != 0
    :return: a NormalizedDFE with scale c = alpha_d^(-1/d) (principal root)
    """
    alpha = [complex(c) for c in alpha]
    if not alpha:
        raise InputError("A difference equation needs at least one coefficient")
    if alpha[-1] == 0:
        raise InputError("Degenerate difference equation: the leading coefficient alpha_d is 0")
    d = len(alpha)
    scale = cmath.exp(-cmath.log(alpha[-1]) / d)
    a = tuple(-(alpha[l - 1] * scale ** l) / l for l in range(1, d))
    return NormalizedDFE(Potential(d, a), scale)
