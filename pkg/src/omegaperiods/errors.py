class OmegaError(Exception):
    """
    Base class of every error raised by omegaperiods
    """


class InputError(OmegaError, ValueError):
    """
    Malformed input or a violated precondition
    """


class ToleranceNotMet(OmegaError):
    """
    A numerical method stopped before reaching the requested tolerance.

    :param message: description of the failure
    :param estimate: the best estimate reached (value and achieved error)
    """

    def __init__(self, message, estimate=None):
        super(ToleranceNotMet, self).__init__(message)
        self.estimate = estimate


class PoleProximityError(OmegaError):
    """
    The requested point lies within pole_tol of a pole s = -n.

    :param n: index of the pole
    :param column: column of the Omega matrix that hit the pole, if any
    """

    def __init__(self, message, n, column=None):
        super(PoleProximityError, self).__init__(message)
        self.n = n
        self.column = column
