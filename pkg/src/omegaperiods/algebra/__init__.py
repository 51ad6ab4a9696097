from omegaperiods.algebra.poly import Poly, poly_eval, poly_derive, poly_divmod
from omegaperiods.algebra.potential import Potential, NormalizedDFE, normalize_dfe
from omegaperiods.algebra.series import ExpSeries, exp_series, extend_series

__all__ = [
    "Poly", "poly_eval", "poly_derive", "poly_divmod",
    "Potential", "NormalizedDFE", "normalize_dfe",
    "ExpSeries", "exp_series", "extend_series",
]
