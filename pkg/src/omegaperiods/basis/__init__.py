from omegaperiods.basis.matrix import (
    OmegaMatrix, DetReport, RatioOrderReport,
    omega_matrix, delta, delta_closed_monomial, printed_delta_formula, dft_determinant,
    root_product_vandermonde, vandermonde_det, common_zero_gap, exponential_ratio_order,
)
from omegaperiods.basis.solver import SolutionSpec, solve_samples, eval_solution

__all__ = [
    "OmegaMatrix", "DetReport", "RatioOrderReport",
    "omega_matrix", "delta", "delta_closed_monomial", "printed_delta_formula", "dft_determinant",
    "root_product_vandermonde", "vandermonde_det", "common_zero_gap", "exponential_ratio_order",
    "SolutionSpec", "solve_samples", "eval_solution",
]
