from omegaperiods.reduction.period import (
    SPoly, ExpPolyExpr, PeriodReduction,
    reduce_tpoly, reduce_mixed, rewrite_shift, eval_reduction, reduce_ray_limit, eval_ray_limit,
)
from omegaperiods.reduction.expression import QExpressionParser, parse_q

__all__ = [
    "SPoly", "ExpPolyExpr", "PeriodReduction",
    "reduce_tpoly", "reduce_mixed", "rewrite_shift", "eval_reduction", "reduce_ray_limit", "eval_ray_limit",
    "QExpressionParser", "parse_q",
]
