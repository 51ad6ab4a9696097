import cmath
import logging
from dataclasses import dataclass

import numpy as np

from omegaperiods.basis.matrix import omega_matrix
from omegaperiods.errors import InputError, PoleProximityError
from omegaperiods.omega import PoleInfo

logger = logging.getLogger(__name__)

CONDITION_WARNING = 1e8


@dataclass(frozen=True)
class SolutionSpec:
    """
    The solution f(s) = scale^s sum_k c_k Omega_k(s) of the difference equation

    :param c: coordinates in the Omega basis
    :param scale: scale of the normalization f(s) = scale^s h(s)
    :param residual: relative residual of the solved linear system
    :param condition: condition number of the linear system
    """
    c: tuple
    scale: complex = 1 + 0j
    residual: float = 0.0
    condition: float = 1.0


def _power(scale, s):
    return cmath.exp(s * cmath.log(scale))


def solve_samples(evaluator, s0, v, scale=1):
    """
    Finds the solution taking the values v_l at s0 + l + 1, l = 0..d-1

    :param evaluator: OmegaEvaluator of the normalized equation
    :param s0: the base point
    :param v: the d samples
    :param scale: scale of the normalization, the samples being values of scale^s h(s)
    :return: a SolutionSpec
    """
    d = evaluator.potential.d
    v = [complex(x) for x in v]
    if len(v) != d:
        raise InputError("A degree {} equation needs {} samples, got {}".format(d, d, len(v)))
    if complex(scale) == 0:
        raise InputError("The scale must be non zero")
    s0 = complex(s0)
    system = omega_matrix(evaluator, s0).entries.T
    h = np.array([x / _power(scale, s0 + l + 1) for l, x in enumerate(v)])
    c = np.linalg.solve(system, h)
    residual = float(np.linalg.norm(system @ c - h) / max(np.linalg.norm(h), np.finfo(float).tiny))
    condition = float(np.linalg.cond(system))
    if condition > CONDITION_WARNING:
        logger.warning("Ill conditioned sample system at s0={}: condition {:.3g}".format(s0, condition))
    return SolutionSpec(tuple(complex(x) for x in c), complex(scale), residual, condition)


def eval_solution(spec, evaluator, s):
    """
    scale^s sum_k c_k Omega_k(s)
    """
    s = complex(s)
    if len(spec.c) != evaluator.potential.d:
        raise InputError("Solution has {} coordinates for degree {}".format(len(spec.c), evaluator.potential.d))
    total = 0j
    for k, c in enumerate(spec.c):
        if c == 0:
            continue
        value = evaluator.omega(k, s)
        if isinstance(value, PoleInfo):
            raise PoleProximityError("s={} lies on the pole {}".format(s, -value.n), value.n)
        total += c * value
    return _power(spec.scale, s) * total
