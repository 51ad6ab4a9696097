from dataclasses import dataclass

from omegaperiods.errors import InputError


@dataclass(frozen=True)
class ExpSeries:
    """
    Taylor coefficients lambda_0..lambda_N of exp(P0(t)), which are also the
    residues of every Omega_k at s = -n
    """
    lambdas: tuple

    @property
    def N(self):
        return len(self.lambdas) - 1

    def __getitem__(self, n):
        return self.lambdas[n]

    def __len__(self):
        return len(self.lambdas)


def exp_series(P0, N):
    """
    Computes lambda_0..lambda_N with the recurrence
    n*lambda_n = sum_{k=1}^{d} k*a_k*lambda_{n-k}, lambda_0 = 1

    :param P0: the potential
    :param N: truncation order, N >= 0
    :return: an ExpSeries
    """
    return extend_series(P0, ExpSeries((1 + 0j,)), N)


def extend_series(P0, series, N):
    """
    Extends an ExpSeries of P0 up to order N; existing entries are kept as they are
    """
    if N < 0:
        raise InputError("Series order must be non negative, got {}".format(N))
    if N <= series.N:
        return series
    # d*a_d = -1 exactly
    weights = [k * a_k for k, a_k in enumerate(P0.a, start=1)] + [-1.0 + 0j]
    lambdas = list(series.lambdas)
    for n in range(len(lambdas), N + 1):
        acc = 0j
        for k in range(1, min(P0.d, n) + 1):
            acc += weights[k - 1] * lambdas[n - k]
        lambdas.append(acc / n)
    return ExpSeries(tuple(lambdas))
