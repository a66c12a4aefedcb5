"""Risk functionals: exact evaluators, attack lower bounds and closed-form bounds."""

from .attack import DEFAULT_ATTACK_BUDGET, robust_risk_lower_bound
from .bounds import (
    analytic_gaussian_linear_robust_accuracy,
    as_fraction,
    monte_carlo_gaussian_linear_robust_accuracy,
    normal_cdf,
    union_bound,
)
from .exact import (
    ErrorDecomposition,
    decompose_detector_errors,
    evaluate,
    map_entries,
    risk,
    robust_risk_det_exact,
    robust_risk_exact,
)

__all__ = [
    "DEFAULT_ATTACK_BUDGET",
    "ErrorDecomposition",
    "analytic_gaussian_linear_robust_accuracy",
    "as_fraction",
    "decompose_detector_errors",
    "evaluate",
    "map_entries",
    "monte_carlo_gaussian_linear_robust_accuracy",
    "normal_cdf",
    "risk",
    "robust_risk_det_exact",
    "robust_risk_exact",
    "robust_risk_lower_bound",
    "union_bound",
]
