"""
Reference complex Gamma function.

Lanczos approximation with g = 7 and the nine coefficients published by
P. Godfrey (the set reproduced in Numerical Recipes 3rd ed. and in most
Lanczos implementations), combined with the reflection formula for Re s < 1/2.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from typing import Optional

logger = logging.getLogger(__name__)

LANCZOS_G = 7
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
POLE_TOL = 1e-8
_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)


@dataclass(frozen=True)
class GammaValue:
    """
    Either the value of Gamma(s) or the index n of the pole s = -n
    """
    value: Optional[complex] = None
    at_pole: Optional[int] = None

    def __post_init__(self):
        if (self.value is None) == (self.at_pole is None):
            raise ValueError("GammaValue holds exactly one of value and at_pole")


def _pole_index(s, pole_tol=POLE_TOL):
    n = round(-s.real)
    if n >= 0 and abs(s + n) < pole_tol:
        return n
    return None


def _lanczos(s):
    # valid for Re s >= 1/2
    z = s - 1
    x = LANCZOS_COEFFICIENTS[0]
    for i in range(1, len(LANCZOS_COEFFICIENTS)):
        x += LANCZOS_COEFFICIENTS[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return cmath.exp(_LOG_SQRT_2PI + (z + 0.5) * cmath.log(t) - t) * x


def complex_gamma(s):
    """
    Gamma(s) as a plain complex; raises ZeroDivisionError at a pole
    """
    s = complex(s)
    if _pole_index(s) is not None:
        raise ZeroDivisionError("Gamma has a pole at {}".format(s))
    if s.real < 0.5:
        return math.pi / (cmath.sin(math.pi * s) * _lanczos(1 - s))
    return _lanczos(s)


def gamma(s, pole_tol=POLE_TOL):
    """
    Gamma function of a complex argument

    :param s: the argument
    :param pole_tol: distance below which s is reported as the pole -n
    :return: a GammaValue
    """
    s = complex(s)
    n = _pole_index(s, pole_tol)
    if n is not None:
        return GammaValue(at_pole=n)
    if s.real < 0.5:
        return GammaValue(value=math.pi / (cmath.sin(math.pi * s) * _lanczos(1 - s)))
    return GammaValue(value=_lanczos(s))


def gauss_multiplication_ratio(z, d):
    """
    Ratio of both sides of the multiplication formula
    Gamma(z)Gamma(z+1/d)...Gamma(z+(d-1)/d) = (2pi)^((d-1)/2) d^(1/2-dz) Gamma(dz);
    equals 1 up to rounding
    """
    lhs = 1 + 0j
    for j in range(d):
        lhs *= complex_gamma(z + j / d)
    rhs = (2 * math.pi) ** ((d - 1) / 2) * cmath.exp((0.5 - d * z) * math.log(d)) * complex_gamma(d * z)
    return lhs / rhs
