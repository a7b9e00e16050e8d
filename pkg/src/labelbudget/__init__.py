"""labelbudget: spend a noisy-label budget to compare binary classifiers.

Exact tail probabilities of summed gap indicators, Hoeffding and Cramer
failure bounds, union-bound benchmark capacity, and a sweep harness over
the accuracy-parameter grid, fronted by a CLI and a small JSON service.
"""

from .bounds import (
    CapacityReport,
    DegenerateDistributionWarning,
    LegendreRate,
    RateReport,
    SqrtCondition,
    capacity,
    cramer_rate,
    hoeffding_failure_bound,
    hoeffding_sqrt_condition,
    legendre_numeric,
    min_sample_size,
    rate_report,
)
from .errors import (
    LabelBudgetError,
    NumericalError,
    ResourceLimitError,
    ValidationError,
)
from .exact import (
    ComparisonReport,
    MonteCarloResult,
    SumDist,
    brute_force_sum,
    compare_strategies,
    monte_carlo_success,
    prob_positive,
    success_probability,
    sum_distribution,
)
from .gap_model import (
    BudgetPlan,
    CorrelatedParams,
    IndependentParams,
    TernaryDist,
    aggregate,
    gap_dist_correlated,
    gap_dist_independent,
    gap_distribution,
    majority_derivative,
    majority_prob,
    sigma,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BudgetPlan",
    "CapacityReport",
    "ComparisonReport",
    "CorrelatedParams",
    "DegenerateDistributionWarning",
    "IndependentParams",
    "LabelBudgetError",
    "LegendreRate",
    "MonteCarloResult",
    "NumericalError",
    "RateReport",
    "ResourceLimitError",
    "SqrtCondition",
    "SumDist",
    "TernaryDist",
    "ValidationError",
    "aggregate",
    "brute_force_sum",
    "capacity",
    "compare_strategies",
    "cramer_rate",
    "gap_dist_correlated",
    "gap_dist_independent",
    "gap_distribution",
    "hoeffding_failure_bound",
    "hoeffding_sqrt_condition",
    "legendre_numeric",
    "majority_derivative",
    "majority_prob",
    "min_sample_size",
    "monte_carlo_success",
    "prob_positive",
    "rate_report",
    "sigma",
    "success_probability",
    "sum_distribution",
]
