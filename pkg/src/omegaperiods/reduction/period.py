import cmath
import logging
from dataclasses import dataclass, field

from omegaperiods.algebra import Poly
from omegaperiods.errors import InputError
from omegaperiods.quadrature import Estimate
from omegaperiods.utils import _complex_to_json

logger = logging.getLogger(__name__)


class SPoly(Poly):
    """
    Polynomial in the exponent variable s
    """
    variable = "s"

    def divide_by_variable(self):
        """
        p(s)/s for a polynomial with p(0) = 0
        """
        if self.coeff(0) != 0:
            raise InputError("{} is not divisible by s".format(self))
        return SPoly(self.coeffs[1:])

    def to_json(self):
        return [_complex_to_json(c) for c in self.coeffs]


S = SPoly((0, 1))


def _shift(m):
    """
    The polynomial s + m
    """
    return SPoly((m, 1))


@dataclass(frozen=True)
class ExpPolyExpr:
    """
    Expression sum c_{i,m}(s) z^i (z^s)^m, stored as {(i, m): SPoly}; zero entries are dropped
    """
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {key: c for key, c in sorted(self.terms.items()) if not c.is_zero})

    @property
    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, SPoly()) + c
        return ExpPolyExpr(terms)

    def evaluate(self, sigma, z):
        """
        Value at exponent sigma and point z, with z^sigma taken on the principal branch
        """
        sigma, z = complex(sigma), complex(z)
        log_z = cmath.log(z)
        return sum((c(sigma) * z ** i * cmath.exp(m * sigma * log_z) for (i, m), c in self.terms.items()), 0j)

    def to_json(self):
        return [{"i": i, "m": m, "spoly": c.to_json()} for (i, m), c in self.terms.items()]


@dataclass(frozen=True)
class PeriodReduction:
    """
    int_0^z t^sigma Q(t) exp(P0(t)) dt = A(sigma, z, z^sigma) exp(P0(z)) + sum_k c_k(sigma) W(sigma+k, z)
    with W the incomplete Omega function, k = 0..d-1 and sigma = sigma_shift * s

    :param A: boundary term, an ExpPolyExpr
    :param c: the coefficients c_0..c_{d-1}
    :param sigma_shift: the power m of t^s the reduction belongs to
    """
    A: ExpPolyExpr
    c: tuple
    sigma_shift: int = 1

    def __add__(self, other):
        if self.sigma_shift != other.sigma_shift or len(self.c) != len(other.c):
            raise InputError("Reductions of different shape can not be added")
        return PeriodReduction(self.A + other.A, tuple(a + b for a, b in zip(self.c, other.c)), self.sigma_shift)

    def to_json(self):
        return {
            "A": self.A.to_json(),
            "c": [c.to_json() for c in self.c],
            "sigma_shift": self.sigma_shift,
        }


def _window(c, d):
    return tuple(c.get(j, SPoly()) for j in range(d))


def _add(terms, key, value):
    terms[key] = terms.get(key, SPoly()) + value


def _reduce_linear(Q):
    """
    d = 1: int t^(s+n) e^-t = -z^(s+n) e^-z + (s+n) int t^(s+n-1) e^-t, down to n = 0
    """
    boundary = {}
    c0 = SPoly()
    for n, q in enumerate(Q.coeffs):
        if q == 0:
            continue
        factor = SPoly((q,))
        for j in range(n + 1):
            _add(boundary, (n - j, 1), -factor)
            factor = factor * _shift(n - j)
        c0 = c0 + factor
    return ExpPolyExpr(boundary), (c0,)


def _divmod_derivative(Q, D):
    """
    Euclidean division of Q (list of SPoly, by power of t) by P0' (complex, leading
    coefficient -1)
    """
    rem = list(Q)
    e = len(D) - 1
    quot = [SPoly() for _ in range(len(rem) - e)]
    for i in range(len(rem) - 1 - e, -1, -1):
        q = -rem[i + e]
        quot[i] = q
        for j, dj in enumerate(D):
            rem[i + j] = rem[i + j] - q * dj
    return quot, rem[:e]


def _trim_spolys(Q):
    Q = list(Q)
    while Q and Q[-1].is_zero:
        Q.pop()
    return Q


def reduce_tpoly(P0, Q):
    """
    Rewrites int_0^z t^s Q(t) exp(P0(t)) dt as
    A(s, z, z^s) exp(P0(z)) + sum_{k<d} c_k(s) W(s+k, z).
    For d >= 2 Q is divided by P0' and the quotient part integrated by parts,
    which lowers the degree by d-1 at each step.

    :param P0: the Potential
    :param Q: a Poly in t
    :return: a PeriodReduction with sigma_shift 1
    """
    d = P0.d
    if d == 1:
        A, c = _reduce_linear(Q)
        return PeriodReduction(A, c, 1)
    D = P0.derivative.coeffs
    boundary = {}
    c = {}
    current = _trim_spolys(SPoly((q,)) for q in Q.coeffs)
    steps = 0
    while len(current) - 1 >= d - 1:
        quot, rem = _divmod_derivative(current, D)
        for j, b in enumerate(rem):
            _add(c, j + 1, b)
        for i, a in enumerate(quot):
            _add(boundary, (i, 1), a)
        # s * int t^(s-1) A = s A(0) W(s, z) + s * int t^s (A - A(0))/t
        _add(c, 0, -(S * quot[0]))
        derivative = [quot[i] * i for i in range(1, len(quot))]
        current = _trim_spolys(
            [-derivative[i] - S * quot[i + 1] for i in range(len(quot) - 1)])
        steps += 1
    for j, q in enumerate(current):
        _add(c, j + 1, q)
    logger.debug("reduction of degree {} polynomial in {} steps".format(Q.degree, steps))
    return PeriodReduction(ExpPolyExpr(boundary), _window(c, d), 1)


def reduce_mixed(P0, Q):
    """
    Reduces int_0^z Q(t, t^s) exp(P0(t)) dt group by group: the terms y^m Q_m(t)
    give the reduction of Q_m at exponent sigma = m*s

    :param P0: the Potential
    :param Q: {(i, m): coefficient of t^i y^m}
    :return: a list of PeriodReduction ordered by m, one per non zero group
    """
    groups = {}
    for (i, m), q in Q.items():
        if i < 0 or m < 0:
            raise InputError("Negative power t^{} y^{}".format(i, m))
        if q != 0:
            groups.setdefault(m, {})[i] = q
    reductions = []
    for m in sorted(groups):
        coeffs = [groups[m].get(i, 0j) for i in range(max(groups[m]) + 1)]
        red = reduce_tpoly(P0, Poly(coeffs))
        reductions.append(PeriodReduction(red.A, red.c, m))
    return reductions


def rewrite_shift(P0, k):
    """
    W(s+k, z) in the window W(s, z)..W(s+d-1, z) plus a boundary term, from
    W(s+m+d, z) = (s+m) W(s+m, z) - z^(s+m) e^P0(z) - sum_{l<d} alpha_l W(s+m+l, z)

    :param P0: the Potential
    :param k: the shift, k >= d
    :return: the pair (c, boundary)
    """
    d = P0.d
    if int(k) != k or k < d:
        raise InputError("rewrite_shift needs k >= d = {}, got {}".format(d, k))
    k = int(k)
    alpha = P0.alpha
    coef = [SPoly() for _ in range(k + 1)]
    coef[k] = SPoly((1,))
    boundary = {}
    for m in range(k - d, -1, -1):
        c = coef[m + d]
        if c.is_zero:
            continue
        coef[m + d] = SPoly()
        coef[m] = coef[m] + c * _shift(m)
        _add(boundary, (m, 1), -c)
        for l in range(1, d):
            coef[m + l] = coef[m + l] - c * alpha[l - 1]
    return tuple(coef[:d]), ExpPolyExpr(boundary)


def eval_reduction(red, evaluator, s, z, full_output=False):
    """
    Numeric value of a reduction: A e^P0(z) + sum_k c_k(sigma) W(sigma+k, z), sigma = sigma_shift*s.
    At sigma = 0 the term c_0 W(sigma, z) is its limit (c_0/s)(0), as sigma W(sigma, z) -> 1.

    :param red: a PeriodReduction
    :param evaluator: an OmegaEvaluator of the same potential
    :param s: the point, Re s > 0
    :param z: the end point, z != 0
    :param full_output: return an Estimate instead of the value
    """
    s, z = complex(s), complex(z)
    if s.real <= 0:
        raise InputError("eval_reduction needs Re s > 0, got {}".format(s))
    if z == 0:
        raise InputError("The end point z must be non zero")
    sigma = red.sigma_shift * s
    P0 = evaluator.potential
    total = Estimate(red.A.evaluate(sigma, z) * cmath.exp(complex(P0(z))))
    for k, c in enumerate(red.c):
        if c.is_zero:
            continue
        if k == 0 and red.sigma_shift == 0:
            total = total + Estimate(c.divide_by_variable()(0))
            continue
        total = total + evaluator.incomplete(sigma + k, z, full_output=True).scaled(c(sigma))
    return total if full_output else total.value


def reduce_ray_limit(red, k):
    """
    Coefficients of Omega_k(sigma+j), j < d, in the limit z -> inf*w_k, where the
    boundary term vanishes. For sigma_shift 0 the exponent is sigma = 0, a pole of
    Omega_k with residue 1: there c_0(sigma) Omega_k(sigma) stands for its limit
    (c_0/s)(0), the way `eval_ray_limit` evaluates it.

    :param red: a PeriodReduction with sigma_shift 0 or 1
    :param k: ray index
    :return: the coefficients c_0..c_{d-1}
    """
    if red.sigma_shift not in (0, 1):
        raise InputError("Ray limits of the t^s power {} leave the window basis".format(red.sigma_shift))
    if int(k) != k or not 0 <= k < len(red.c):
        raise InputError("Ray index {} out of range for degree {}".format(k, len(red.c)))
    return red.c


def eval_ray_limit(red, evaluator, k, s, full_output=False):
    """
    Numeric value of int_0^{inf w_k} t^sigma Q(t) exp(P0(t)) dt from a reduction,
    sum_j c_j(sigma) Omega_k(sigma+j), sigma = sigma_shift*s

    :param red: a PeriodReduction with sigma_shift 0 or 1
    :param evaluator: an OmegaEvaluator of the same potential
    :param k: ray index
    :param s: the point, Re s > 0
    :param full_output: return an Estimate instead of the value
    """
    c = reduce_ray_limit(red, k)
    s = complex(s)
    if s.real <= 0:
        raise InputError("eval_ray_limit needs Re s > 0, got {}".format(s))
    sigma = red.sigma_shift * s
    total = Estimate(0j)
    for j, c_j in enumerate(c):
        if c_j.is_zero:
            continue
        if j == 0 and red.sigma_shift == 0:
            total = total + Estimate(c_j.divide_by_variable()(0))
            continue
        total = total + evaluator.omega(k, sigma + j, full_output=True).scaled(c_j(sigma))
    return total if full_output else total.value
