import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from omegaperiods.algebra import poly_derive
from omegaperiods.errors import InputError, PoleProximityError
from omegaperiods.gamma_ref import complex_gamma
from omegaperiods.omega import PoleInfo

logger = logging.getLogger(__name__)

CLOSED_FORM_RTOL = 1e-8


@dataclass(frozen=True)
class OmegaMatrix:
    """
    entries[k, l] = Omega_k(s0 + l + 1), k, l = 0..d-1
    """
    s0: complex
    entries: np.ndarray

    @property
    def d(self):
        return self.entries.shape[0]

    def singular_values(self):
        return np.linalg.svd(self.entries, compute_uv=False)

    def smallest_singular_value(self):
        return float(self.singular_values()[-1])


@dataclass(frozen=True)
class DetReport:
    """
    Determinant of the Omega matrix; for the monomial potential also the closed
    form and the value of the constant (2 pi d)^(d/2)/sqrt(2 pi) it is compared with
    """
    value: complex
    closed_form_monomial: complex = None
    printed_formula_value: complex = None

    @property
    def formula_ratio(self):
        if self.printed_formula_value is None or self.closed_form_monomial is None:
            return None
        return self.printed_formula_value / self.closed_form_monomial

    @property
    def warnings(self):
        ratio = self.formula_ratio
        if ratio is None or abs(ratio - 1) <= CLOSED_FORM_RTOL:
            return []
        return ["printed constant (2*pi*d)^(d/2)/sqrt(2*pi) differs from the computed determinant by "
                "a factor {:.12g}{:+.12g}i".format(ratio.real, ratio.imag)]


def omega_matrix(evaluator, s0):
    """
    The matrix [Omega_k(s0 + l + 1)]

    :param evaluator: an OmegaEvaluator
    :param s0: the base point; s0 + 1..s0 + d must avoid the poles
    :return: an OmegaMatrix
    """
    s0 = complex(s0)
    d = evaluator.potential.d
    entries = np.empty((d, d), dtype=complex)
    for l in range(d):
        for k in range(d):
            value = evaluator.omega(k, s0 + l + 1)
            if isinstance(value, PoleInfo):
                raise PoleProximityError(
                    "Column {} of the Omega matrix hits the pole {}".format(l, -value.n), value.n, column=l)
            entries[k, l] = value
    return OmegaMatrix(s0, entries)


@lru_cache(maxsize=None)
def dft_determinant(d):
    """
    det[w^(k l)], k = 0..d-1, l = 1..d, w = exp(2 pi i/d)
    """
    k = np.arange(d)[:, None]
    l = np.arange(1, d + 1)[None, :]
    return complex(np.linalg.det(np.exp(2j * np.pi * k * l / d)))


def delta_closed_monomial(d, s0):
    """
    Determinant of the Omega matrix of -t^d/d,
    w^(d(d-1)s0/2) (2 pi)^((d-1)/2) d^(-d/2) D_d Gamma(s0+1), D_d = det[w^(k l)]
    """
    s0 = complex(s0)
    if int(d) != d or d < 1:
        raise InputError("Degree must be a positive integer, got {}".format(d))
    try:
        gamma_value = complex_gamma(s0 + 1)
    except ZeroDivisionError:
        raise PoleProximityError("Gamma(s0+1) has a pole at s0={}".format(s0), int(round(-s0.real)) - 1)
    phase = cmath.exp(1j * math.pi * (d - 1) * s0)
    return phase * (2 * math.pi) ** ((d - 1) / 2) * d ** (-d / 2) * dft_determinant(d) * gamma_value


def printed_delta_formula(d, s0):
    """
    (2 pi d)^(d/2)/sqrt(2 pi) w^(d(d-1)s0/2) Gamma(s0+1), kept for comparison only
    """
    s0 = complex(s0)
    phase = cmath.exp(1j * math.pi * (d - 1) * s0)
    return (2 * math.pi * d) ** (d / 2) / math.sqrt(2 * math.pi) * phase * complex_gamma(s0 + 1)


def delta(evaluator, s0):
    """
    Determinant of the Omega matrix at s0, by LU with partial pivoting

    :param evaluator: an OmegaEvaluator
    :param s0: the base point
    :return: a DetReport
    """
    matrix = omega_matrix(evaluator, s0)
    value = complex(np.linalg.det(matrix.entries))
    if not evaluator.potential.is_monomial:
        return DetReport(value)
    d = evaluator.potential.d
    report = DetReport(value, delta_closed_monomial(d, s0), printed_delta_formula(d, s0))
    for warning in report.warnings:
        logger.warning(warning)
    return report


def root_product_vandermonde(Q, roots):
    """
    prod_i Q'(xi_i) over the roots xi_i of the monic polynomial Q
    """
    derivative = poly_derive(Q)
    return complex(np.prod([derivative(r) for r in roots])) if len(roots) else 1 + 0j


def vandermonde_det(roots):
    """
    det[xi_i^j]; its square is (-1)^(d(d-1)/2) prod_i Q'(xi_i)
    """
    return complex(np.linalg.det(np.vander(np.asarray(roots, dtype=complex), increasing=True)))


def common_zero_gap(evaluator, s):
    """
    max_k |Omega_k(s)|, positive as the Omega functions have no common zero
    """
    s = complex(s)
    gap = 0.0
    for k in range(evaluator.potential.d):
        value = evaluator.omega(k, s)
        if isinstance(value, PoleInfo):
            raise PoleProximityError("s={} lies on the pole {}".format(s, -value.n), value.n)
        gap = max(gap, abs(value))
    return gap


@dataclass(frozen=True)
class RatioOrderReport:
    """
    Finite difference structure of log(Delta(s|a)/Delta(s|0)) on integer points.
    residuals[q] is the largest difference of order q + 1 relative to the sampled values;
    order is the first q with residuals[q] <= rtol, None if there is none.
    """
    order: int
    cap: int
    residuals: tuple

    @property
    def escalated(self):
        return self.order is None or self.order > self.cap


def exponential_ratio_order(evaluator, monomial_evaluator, points=range(1, 13), rtol=1e-6):
    """
    Estimates the degree in s of log(Delta(s|a)/Delta(s|0)) from finite differences

    :param evaluator: OmegaEvaluator of the potential a
    :param monomial_evaluator: OmegaEvaluator of -t^d/d
    :param points: integer sample points
    :param rtol: threshold of a vanishing difference
    :return: a RatioOrderReport
    """
    d = evaluator.potential.d
    if monomial_evaluator.potential.d != d or not monomial_evaluator.potential.is_monomial:
        raise InputError("The reference evaluator must hold the monomial potential of degree {}".format(d))
    ratios = np.array([delta(evaluator, s).value / delta(monomial_evaluator, s).value for s in points])
    logs = np.log(np.abs(ratios)) + 1j * np.unwrap(np.angle(ratios))
    scale = max(float(np.max(np.abs(logs))), 1.0)
    residuals = tuple(float(np.max(np.abs(np.diff(logs, n=q)))) / scale for q in range(1, len(logs)))
    order = next((q for q, r in enumerate(residuals) if r <= rtol), None)
    report = RatioOrderReport(order, 2 * d, residuals)
    if report.escalated:
        logger.warning("log Delta ratio of {}: order {} beyond the cap {}".format(
            evaluator.potential, order, report.cap))
    return report
