"""Gap-indicator model: accuracy parameters, majority voting, ternary laws.

The central object is the per-data-point *gap indicator* G on {+1, 0, -1}:
+1 when the better classifier alone agrees with the (noisy, possibly
aggregated) test label, -1 when the worse classifier alone does, 0 when the
classifiers agree with each other.  Everything downstream (exact sums,
failure bounds, capacity planning) consumes the ternary law of G produced
here.

Two parameterizations are supported:

* independent  -- classifier errors and label errors mutually independent;
  described by (p, epsilon, q).
* correlated   -- label accuracy conditioned on which classifier is right;
  described by (p_w, p_b0, p_b1, q_b, q_w).

Majority voting over m annotators, each correct with probability q, enters
through ``majority_prob``: collecting m labels per point is statistically
identical to collecting one label of accuracy M_m(q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import ValidationError

__all__ = [
    "IndependentParams",
    "CorrelatedParams",
    "TernaryDist",
    "BudgetPlan",
    "majority_prob",
    "sigma",
    "majority_derivative",
    "gap_dist_independent",
    "gap_dist_correlated",
    "gap_distribution",
    "aggregate",
]

# Construction tolerances for ternary laws assembled from float arithmetic.
_SIMPLEX_ATOL = 1e-12


def _check_range(name: str, value: float, lo: float, hi: float,
                 *, lo_open: bool = False, hi_open: bool = False) -> None:
    bad_lo = value <= lo if lo_open else value < lo
    bad_hi = value >= hi if hi_open else value > hi
    if bad_lo or bad_hi:
        lob, hib = "(" if lo_open else "[", ")" if hi_open else "]"
        raise ValidationError(
            f"{name}={value!r} outside {lob}{lo}, {hi}{hib}")


@dataclass(frozen=True)
class IndependentParams:
    """Accuracies for the independent-error comparison model.

    p is the worse classifier's accuracy, epsilon the accuracy margin of the
    better one over it, and q the probability a single annotator label is
    correct.
    """

    p: float
    epsilon: float
    q: float

    def __post_init__(self) -> None:
        _check_range("p", self.p, 0.5, 1.0)
        _check_range("q", self.q, 0.5, 1.0, lo_open=True)
        if not (self.epsilon > 0.0 and self.p + self.epsilon <= 1.0):
            raise ValidationError(
                f"epsilon={self.epsilon!r} outside (0, 1-p] with p={self.p!r}")


@dataclass(frozen=True)
class CorrelatedParams:
    """Accuracies for the correlated comparison model.

    p_w is the worse classifier's accuracy; p_b0 / p_b1 are the better
    classifier's accuracies conditional on the worse being wrong / right;
    q_b / q_w are the label accuracies conditional on "better right, worse
    wrong" / "worse right, better wrong".

    The risk ordering (1-p_w)*p_b0 + p_w*p_b1 > p_w (the better classifier
    really is better) is enforced.  q_b >= q_w (no label bias toward the
    worse classifier) is deliberately *not* enforced: sweeps explore its
    violation, so it is exposed as ``assumption1_satisfied`` instead.
    """

    p_w: float
    p_b0: float
    p_b1: float
    q_b: float
    q_w: float

    def __post_init__(self) -> None:
        _check_range("p_w", self.p_w, 0.5, 1.0)
        _check_range("p_b0", self.p_b0, 0.5, 1.0)
        _check_range("p_b1", self.p_b1, 0.5, 1.0)
        _check_range("q_b", self.q_b, 0.5, 1.0, lo_open=True)
        _check_range("q_w", self.q_w, 0.5, 1.0, lo_open=True)
        if not (1.0 - self.p_w) * self.p_b0 + self.p_w * self.p_b1 > self.p_w:
            raise ValidationError(
                "risk ordering violated: (1-p_w)*p_b0 + p_w*p_b1 must exceed "
                f"p_w (got p_w={self.p_w!r}, p_b0={self.p_b0!r}, "
                f"p_b1={self.p_b1!r})")

    @property
    def assumption1_satisfied(self) -> bool:
        """True when q_b >= q_w, which guarantees a positive gap mean."""
        return self.q_b >= self.q_w


@dataclass(frozen=True)
class TernaryDist:
    """Law of the gap indicator: Pr(+1)=x, Pr(-1)=y, Pr(0)=z."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            v = getattr(self, name)
            if v < 0.0:
                if v < -_SIMPLEX_ATOL:
                    raise ValidationError(
                        f"{name}={v!r} is negative beyond round-off")
                object.__setattr__(self, name, 0.0)
        total = self.x + self.y + self.z
        if abs(total - 1.0) > _SIMPLEX_ATOL:
            raise ValidationError(
                f"probabilities sum to {total!r}, not 1 within {_SIMPLEX_ATOL}")

    @property
    def expectation(self) -> float:
        return self.x - self.y


@dataclass(frozen=True)
class BudgetPlan:
    """Allocation of a label budget k into n data points with m labels each."""

    k: int
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValidationError(f"labels per point m={self.m!r} must be >= 1")
        if self.n < 1:
            raise ValidationError("budget below one data point")
        if self.n * self.m > self.k:
            raise ValidationError(
                f"plan n*m = {self.n * self.m} exceeds budget k={self.k}")

    @classmethod
    def from_budget(cls, k: int, m: int) -> "BudgetPlan":
        """Spend budget k at m labels per point; leftover k - m*floor(k/m)
        labels are discarded."""
        if m < 1:
            raise ValidationError(f"labels per point m={m!r} must be >= 1")
        return cls(k=k, m=m, n=k // m)


def _central_term(j: int, w: float) -> float:
    """C(2j, j) * w**j, accumulated multiplicatively.

    The ratio update term *= 2(2i+1)/(i+1) * w never touches a factorial, so
    the value stays representable in float64 for any j when w <= 1/4 (and
    w = q(1-q) always is).
    """
    term = 1.0
    for i in range(j):
        term *= 2.0 * (2 * i + 1) / (i + 1) * w
    return term


def _validate_vote_args(q: float, m: int) -> None:
    if not isinstance(m, int) or isinstance(m, bool):
        raise ValidationError(f"voter count m={m!r} must be an integer")
    if m < 1:
        raise ValidationError(f"voter count m={m!r} must be >= 1")
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"vote accuracy q={q!r} outside [0, 1]")


def sigma(m: int, q: float) -> float:
    """Partial sum sigma(m, q) = sum over odd k <= m-2 of
    C(k, ceil(k/2)) * (q(1-q))**ceil(k/2), for odd m.

    sigma(1, q) == 0 (empty sum).  Terms are built by ratio updates on the
    running binomial weight; no factorials appear.
    """
    _validate_vote_args(q, m)
    if m % 2 == 0:
        raise ValidationError(f"sigma is defined for odd m only, got {m}")
    w = q * (1.0 - q)
    total = 0.0
    term = 2.0 * w  # C(2,1) * w, i.e. j = 1
    for j in range(1, (m - 1) // 2 + 1):
        total += 0.5 * term  # C(2j-1, j) = C(2j, j) / 2
        term *= 2.0 * (2 * j + 1) / (j + 1) * w
    return total


def majority_prob(q: float, m: int) -> float:
    """Probability that a strict majority of m independent voters is correct,
    each correct with probability q.

    Odd m uses M_m(q) = q + (2q-1) * sigma(m, q).  Even m applies one
    decrement step M_m(q) = M_{m-1}(q) - C(m-1, m/2) * (q(1-q))**(m/2):
    an even panel only keeps a majority reached at m-1 votes unless the
    margin was exactly one and the extra vote opposes it.
    """
    _validate_vote_args(q, m)
    if m % 2 == 1:
        return q + (2.0 * q - 1.0) * sigma(m, q)
    w = q * (1.0 - q)
    half = m // 2
    return majority_prob(q, m - 1) - 0.5 * _central_term(half, w)


def majority_derivative(q: float, m: int) -> float:
    """d/dq of majority_prob for odd m:
    m * C(m-1, (m-1)/2) * (q(1-q))**((m-1)/2)."""
    _validate_vote_args(q, m)
    if m % 2 == 0:
        raise ValidationError(
            f"majority_derivative is defined for odd m only, got {m}")
    if not 0.0 < q < 1.0:
        raise ValidationError(f"derivative requires 0 < q < 1, got {q!r}")
    return m * _central_term((m - 1) // 2, q * (1.0 - q))


def _independent_xyz(p: float, epsilon: float, q: float) -> tuple[float, float, float]:
    """Raw gap-law formulas for the independent model; no range validation.

    Grid sweeps and figure tables step onto boundary values (q = 0.5) that
    the validated parameter type rejects, so they come through here.
    """
    off = (1.0 - p - epsilon) * p
    x = q * epsilon + off
    y = (1.0 - q) * epsilon + off
    z = p * (p + epsilon) + (1.0 - p - epsilon) * (1.0 - p)
    return x, y, z


def _correlated_xyz(q_b: float, q_w: float, p_w: float,
                    p_b0: float, p_b1: float) -> tuple[float, float, float]:
    """Raw gap-law formulas for the correlated model; no range validation."""
    win_b = (1.0 - p_w) * p_b0   # better right where worse is wrong
    win_w = p_w * (1.0 - p_b1)   # worse right where better is wrong
    x = q_b * win_b + (1.0 - q_w) * win_w
    y = (1.0 - q_b) * win_b + q_w * win_w
    z = 1.0 - win_b - win_w
    return x, y, z


def gap_dist_independent(params: IndependentParams) -> TernaryDist:
    """Gap-indicator law under independent classifier and label errors.

    The mean of the result is (2q-1)*epsilon, positive whenever q > 0.5.
    """
    return TernaryDist(*_independent_xyz(params.p, params.epsilon, params.q))


def gap_dist_correlated(params: CorrelatedParams) -> TernaryDist:
    """Gap-indicator law under correlated classifiers and labels.

    The mean equals (2q_b-1)(1-p_w)p_b0 - (2q_w-1)p_w(1-p_b1).  It can be
    negative when ``assumption1_satisfied`` is False; the distribution is
    still returned and the sign is readable off ``.expectation``.
    """
    return TernaryDist(*_correlated_xyz(
        params.q_b, params.q_w, params.p_w, params.p_b0, params.p_b1))


def gap_distribution(params) -> TernaryDist:
    """Dispatch to the gap law matching the parameter type."""
    if isinstance(params, IndependentParams):
        return gap_dist_independent(params)
    if isinstance(params, CorrelatedParams):
        return gap_dist_correlated(params)
    raise ValidationError(
        f"unsupported parameter type {type(params).__name__}")


def aggregate(params, m: int):
    """Replace label accuracies by their m-vote majority accuracies.

    Collecting m labels per point and majority-voting them is equivalent to
    collecting one label with accuracy M_m(q), so the returned parameters
    describe the m-label design with the budget-side n adjusted elsewhere.
    Only odd m is accepted: an even panel changes the tie semantics of the
    vote, and the strategy comparison is defined on odd panels.
    """
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ValidationError(f"voter count m={m!r} must be an integer >= 1")
    if m % 2 == 0:
        raise ValidationError(
            f"aggregate requires odd m (even panels change tie semantics), got {m}")
    if m == 1:
        return params
    if isinstance(params, IndependentParams):
        return replace(params, q=majority_prob(params.q, m))
    if isinstance(params, CorrelatedParams):
        return replace(params,
                       q_b=majority_prob(params.q_b, m),
                       q_w=majority_prob(params.q_w, m))
    raise ValidationError(
        f"unsupported parameter type {type(params).__name__}")
