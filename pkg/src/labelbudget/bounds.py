"""Failure bounds, large-deviation rates, and benchmark capacity planning.

Two bound families on the failure probability Pr(S_n <= 0) of a
positive-mean sum are provided:

* Hoeffding: exp(-n E^2 / 2) for variables bounded in [-1, 1], valid for
  every n but loose for accurate labels.
* Cramer: exp(n * rate) with the per-sample rate log(2 sqrt(xy) + z) of the
  ternary law; the exponential-decay limit is an upper bound at every n and
  is drastically tighter.

On top sit the union-bound planners: how many pairwise comparisons a test
set of size n supports at family-wise tolerance delta, and conversely the
minimum n for a given number of comparisons.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import NumericalError, ValidationError
from .exact import DEFAULT_SUPPORT_CAP, prob_positive, sum_distribution
from .gap_model import BudgetPlan, TernaryDist

__all__ = [
    "DegenerateDistributionWarning",
    "SqrtCondition",
    "LegendreRate",
    "RateReport",
    "CapacityReport",
    "hoeffding_failure_bound",
    "hoeffding_sqrt_condition",
    "cramer_rate",
    "legendre_numeric",
    "rate_report",
    "capacity",
    "min_sample_size",
]

_T_TOLERANCE = 1e-12
_BRACKET_LIMIT = 60


class DegenerateDistributionWarning(UserWarning):
    """A one-sided ternary law (x = 0 or y = 0) was handed to a rate routine.

    The Legendre optimizer diverges there; the reported rate is the limit
    value log(z), whose failure event degenerates to all-zero draws.
    """


def hoeffding_failure_bound(expectation: float, n: int) -> float:
    """exp(-n E^2 / 2): upper bound on Pr(S_n <= 0) for [-1, 1]-valued
    summands with mean E > 0."""
    if expectation <= 0.0:
        raise ValidationError(
            f"Hoeffding bound requires a positive expectation, got {expectation!r}")
    if n < 1:
        raise ValidationError(f"sample count n={n!r} must be >= 1")
    return math.exp(-n * expectation * expectation / 2.0)


@dataclass(frozen=True)
class SqrtCondition:
    """Outcome of the sqrt(m) > (2 M_m(q) - 1) / (2q - 1) comparison."""

    lhs: float
    rhs: float
    holds: bool


def hoeffding_sqrt_condition(m: int, q: float) -> SqrtCondition:
    """Check sqrt(m) > (2 M_m(q) - 1) / (2q - 1) for odd m >= 3.

    When it holds, the Hoeffding success bound for mn single-label points
    beats the one for n aggregated points.  The right side is evaluated as
    1 + 2 sigma(m, q), which stays finite as q -> 0.5 where the raw ratio
    is 0/0.
    """
    from .gap_model import sigma

    if not isinstance(m, int) or isinstance(m, bool) or m < 3 or m % 2 == 0:
        raise ValidationError(f"m={m!r} must be an odd integer >= 3")
    if not 0.5 < q <= 1.0:
        raise ValidationError(f"q={q!r} outside (0.5, 1]")
    lhs = math.sqrt(m)
    rhs = 1.0 + 2.0 * sigma(m, q)
    return SqrtCondition(lhs=lhs, rhs=rhs, holds=lhs > rhs)


def cramer_rate(dist: TernaryDist) -> float:
    """Per-sample exponential decay rate of Pr(S_n <= 0): log(2 sqrt(xy) + z).

    Always <= 0, with equality iff x = y (AM-GM).  The n-copy rate is
    n times this value.  One-sided laws (x = 0 or y = 0) return the limit
    log(z) under a DegenerateDistributionWarning rather than erroring,
    because sweep grids legitimately touch q = 1.
    """
    if dist.x == 0.0 or dist.y == 0.0:
        warnings.warn(
            "one-sided ternary law: returning limit rate log(z)",
            DegenerateDistributionWarning, stacklevel=2)
        return math.log(dist.z) if dist.z > 0.0 else -math.inf
    rate = math.log(2.0 * math.sqrt(dist.x * dist.y) + dist.z)
    return min(rate, 0.0)


@dataclass(frozen=True)
class LegendreRate:
    """Numerically minimized log-MGF value and its minimizer."""

    rate: float
    t_star: float


def legendre_numeric(dist: TernaryDist) -> LegendreRate:
    """Minimize L(t) = log(x e^t + y e^-t + z) numerically.

    Independent oracle for ``cramer_rate``: the minimizer is located by
    bisecting the sign of L'(t) (equivalently of x e^{2t} - y, which is
    strictly increasing) inside an expanding bracket, to |dt| <= 1e-12.
    Never consults the closed form.
    """
    x, y, z = dist.x, dist.y, dist.z
    if x <= 0.0 or y <= 0.0:
        raise ValidationError(
            "numeric Legendre transform requires x > 0 and y > 0")

    def slope_sign(t: float) -> float:
        return x * math.exp(2.0 * t) - y

    a, b = -1.0, 1.0
    for _ in range(_BRACKET_LIMIT):
        if slope_sign(a) < 0.0:
            break
        a *= 2.0
    else:
        raise NumericalError("failed to bracket the Legendre minimizer from below")
    for _ in range(_BRACKET_LIMIT):
        if slope_sign(b) > 0.0:
            break
        b *= 2.0
    else:
        raise NumericalError("failed to bracket the Legendre minimizer from above")

    while b - a > _T_TOLERANCE:
        mid = 0.5 * (a + b)
        if slope_sign(mid) < 0.0:
            a = mid
        else:
            b = mid
    t_star = 0.5 * (a + b)
    rate = math.log(x * math.exp(t_star) + y * math.exp(-t_star) + z)
    return LegendreRate(rate=rate, t_star=t_star)


@dataclass(frozen=True)
class RateReport:
    """Bounds, rate, and (optionally) the exact failure for one sample size.

    ``hoeffding_failure_bound`` is None when the distribution mean is not
    positive, where that bound is inapplicable.
    """

    hoeffding_failure_bound: float | None
    cramer_rate: float
    cramer_failure_bound: float
    exact_failure: float | None
    n: int
    plan: BudgetPlan


def rate_report(dist: TernaryDist, plan: BudgetPlan, *,
                include_exact: bool = True,
                support_cap: int = DEFAULT_SUPPORT_CAP) -> RateReport:
    """Assemble the per-configuration report for plan.n samples of ``dist``."""
    n = plan.n
    expectation = dist.expectation
    hoeff = (hoeffding_failure_bound(expectation, n)
             if expectation > 0.0 else None)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateDistributionWarning)
        rate = cramer_rate(dist)
    exact = None
    if include_exact:
        exact = 1.0 - prob_positive(
            sum_distribution(dist, n, support_cap=support_cap))
    return RateReport(
        hoeffding_failure_bound=hoeff,
        cramer_rate=rate,
        cramer_failure_bound=math.exp(n * rate),
        exact_failure=exact,
        n=n,
        plan=plan,
    )


@dataclass(frozen=True)
class CapacityReport:
    """Union-bound benchmark capacity at tolerance delta and sample size n.

    Capacities count pairwise *comparisons* floor(delta / failure_bound);
    the number of rankable models is comparisons + 1.  Both are reported to
    leave no ambiguity.
    """

    delta: float
    n: int
    max_comparisons_hoeffding: int
    max_comparisons_cramer: int
    models_hoeffding: int
    models_cramer: int


def _floor_capacity(delta: float, log_bound: float) -> int:
    """floor(delta / exp(log_bound)), robust to bounds that underflow."""
    ratio_log = math.log(delta) - log_bound
    if ratio_log > 700.0:
        # Beyond float range; assemble the integer from base-10 parts,
        # keeping ~16 digits of mantissa precision.
        exp10 = ratio_log / math.log(10.0)
        whole = int(math.floor(exp10))
        mantissa = int(10.0 ** (exp10 - whole) * 10**15)
        return mantissa * 10 ** (whole - 15)
    return int(delta / math.exp(log_bound))


def capacity(dist: TernaryDist, n: int, delta: float) -> CapacityReport:
    """How many comparisons a test set of n points supports at family-wise
    error delta, under each bound family.

    Degenerate inputs never error here: a nonpositive mean gives Hoeffding
    capacity 0, and x = y gives Cramer capacity 0 (the bound is vacuous).
    """
    if not 0.0 < delta < 1.0:
        raise ValidationError(f"delta={delta!r} outside (0, 1)")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"sample count n={n!r} must be an integer >= 1")
    expectation = dist.expectation
    if expectation > 0.0:
        comparisons_h = _floor_capacity(
            delta, -n * expectation * expectation / 2.0)
    else:
        comparisons_h = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateDistributionWarning)
        rate = cramer_rate(dist)
    comparisons_c = _floor_capacity(delta, n * rate) if rate < 0.0 else 0
    return CapacityReport(
        delta=delta,
        n=n,
        max_comparisons_hoeffding=comparisons_h,
        max_comparisons_cramer=comparisons_c,
        models_hoeffding=comparisons_h + 1,
        models_cramer=comparisons_c + 1,
    )


def min_sample_size(dist: TernaryDist, delta: float, comparisons: int,
                    bound: str) -> int:
    """Smallest n with comparisons * failure_bound(n) <= delta.

    The closed-form inversion n = log(k/delta) / rate is taken as a seed and
    then adjusted by direct evaluation at n and n-1, so the result is exactly
    minimal regardless of float rounding in the inversion.
    """
    if not 0.0 < delta <= 1.0:
        raise ValidationError(f"delta={delta!r} outside (0, 1]")
    if not isinstance(comparisons, int) or isinstance(comparisons, bool) or comparisons < 1:
        raise ValidationError(
            f"comparisons={comparisons!r} must be an integer >= 1")
    if bound == "hoeffding":
        expectation = dist.expectation
        if expectation <= 0.0:
            raise ValidationError(
                "Hoeffding sample size requires a positive expectation")
        decay = expectation * expectation / 2.0
    elif bound == "cramer":
        if dist.x == dist.y:
            raise ValidationError(
                "Cramer sample size requires x != y (nonzero rate)")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateDistributionWarning)
            decay = -cramer_rate(dist)
        if decay <= 0.0:
            raise ValidationError(
                "distribution is numerically indistinguishable from x = y")
    else:
        raise ValidationError(
            f"bound={bound!r} must be 'hoeffding' or 'cramer'")

    target = math.log(comparisons / delta)
    n = max(1, math.ceil(target / decay))
    while n > 1 and comparisons * math.exp(-(n - 1) * decay) <= delta:
        n -= 1
    while comparisons * math.exp(-n * decay) > delta:
        n += 1
    return n
