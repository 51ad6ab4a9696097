from omegaperiods.omega.evaluator import OmegaEvaluator, PoleInfo, monomial_omega

__all__ = ["OmegaEvaluator", "PoleInfo", "monomial_omega"]
