from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from omegaperiods.errors import InputError


def _trim(coeffs):
    coeffs = [complex(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class Poly:
    """
    Polynomial with complex coefficients, coeffs[k] being the coefficient of t^k.
    The zero polynomial has no coefficients.
    """
    coeffs: tuple = ()
    variable = "t"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def monomial(cls, k, coeff=1.0):
        return cls((0,) * k + (coeff,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0j

    def _array(self):
        return np.array(self.coeffs or (0j,), dtype=complex)

    def __call__(self, t):
        return poly_eval(self, t)

    def __add__(self, other):
        return type(self)(npoly.polyadd(self._array(), _as_poly(other)._array()))

    __radd__ = __add__

    def __neg__(self):
        return type(self)([-c for c in self.coeffs])

    def __sub__(self, other):
        return type(self)(npoly.polysub(self._array(), _as_poly(other)._array()))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        return type(self)(npoly.polymul(self._array(), _as_poly(other)._array()))

    __rmul__ = __mul__

    def __str__(self):
        if self.is_zero:
            return "0"
        return " + ".join("({})*{}^{}".format(c, self.variable, k) for k, c in enumerate(self.coeffs) if c != 0)


def _as_poly(value):
    return value if isinstance(value, Poly) else Poly((value,))


def poly_eval(p, t):
    """
    Evaluates p at t (scalar or numpy array) with Horner's scheme
    """
    if p.is_zero:
        return np.zeros_like(t, dtype=complex) if isinstance(t, np.ndarray) else 0j
    return npoly.polyval(t, p._array())


def poly_derive(p):
    if p.degree < 1:
        return Poly()
    return Poly(npoly.polyder(p._array()))


def poly_divmod(num, den):
    """
    Euclidean division num = q*den + r with deg r < deg den

    :param num: dividend
    :param den: divisor, not the zero polynomial
    :return: the pair (q, r)
    """
    if den.is_zero:
        raise InputError("Polynomial division by the zero polynomial")
    if num.degree < den.degree:
        return Poly(), num
    q, r = npoly.polydiv(num._array(), den._array())
    return Poly(q), Poly(r)
