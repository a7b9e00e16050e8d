"""Exact law of the summed gap indicator and exact success probabilities.

The test set identifies the better classifier exactly when the sum of n
independent gap indicators is strictly positive; a tie at zero counts as a
failure.  This module computes that law exactly by iterated convolution of
the length-3 base distribution, accelerated by exponentiation by squaring,
plus two independent cross-checks: a multinomial brute-force enumeration and
a seeded Monte Carlo sampler.

Complexity: with exponentiation by squaring the work is dominated by the
last few squarings of supports of length O(n), i.e. O(n^2) multiply-adds
overall for schoolbook convolution.  Supports are capped (default 10^6
entries) and intermediate vectors are trimmed of sub-1e-300 tails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ResourceLimitError, ValidationError
from .gap_model import BudgetPlan, TernaryDist, aggregate, gap_distribution

__all__ = [
    "SumDist",
    "ComparisonReport",
    "MonteCarloResult",
    "sum_distribution",
    "prob_positive",
    "success_probability",
    "compare_strategies",
    "brute_force_sum",
    "monte_carlo_success",
]

DEFAULT_SUPPORT_CAP = 1_000_000
BRUTE_FORCE_MAX_N = 12
TIE_TOLERANCE = 1e-12

# Round-off handling inside the convolution engine.
_NEGATIVE_CLAMP = 1e-15
_TRIM_THRESHOLD = 1e-300


class SumDist:
    """Exact distribution of the sum of n iid ternary gap indicators.

    ``probs[i]`` is Pr(S = i - n) for i in 0..2n, i.e. the support is the
    integer range -n..n.  Entries are clamped of sub-1e-15 negative
    round-off and renormalized; ``drift`` records the largest deviation of
    the total mass from 1 observed before renormalization.
    """

    __slots__ = ("n", "probs", "drift")

    def __init__(self, n: int, probs, drift: float = 0.0):
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValidationError(f"copy count n={n!r} must be an integer >= 1")
        probs = np.asarray(probs, dtype=np.float64)
        if probs.shape != (2 * n + 1,):
            raise ValidationError(
                f"support must have 2n+1 = {2 * n + 1} entries, got {probs.shape}")
        worst = probs.min(initial=0.0)
        if worst < -_NEGATIVE_CLAMP:
            raise ValidationError(
                f"negative probability mass {worst!r} exceeds clamp threshold")
        probs = np.maximum(probs, 0.0)
        total = float(probs.sum())
        if abs(total - 1.0) > 1e-6:
            raise ValidationError(
                f"total mass {total!r} is not a probability distribution")
        self.n = n
        self.probs = probs / total
        self.drift = max(float(drift), abs(total - 1.0))

    def support(self) -> np.ndarray:
        return np.arange(-self.n, self.n + 1)

    def prob_at(self, s: int) -> float:
        if not -self.n <= s <= self.n:
            return 0.0
        return float(self.probs[s + self.n])

    def mean(self) -> float:
        return float(np.dot(self.support(), self.probs))


def _normalized(vec: np.ndarray, drift: float) -> tuple[np.ndarray, float]:
    total = float(vec.sum())
    return vec / total, max(drift, abs(total - 1.0))


def _trimmed(lo: int, vec: np.ndarray) -> tuple[int, np.ndarray]:
    keep = np.nonzero(vec > _TRIM_THRESHOLD)[0]
    if keep.size == 0:
        return lo, vec
    return lo + int(keep[0]), vec[keep[0]:keep[-1] + 1]


def sum_distribution(dist: TernaryDist, n: int, *,
                     support_cap: int = DEFAULT_SUPPORT_CAP) -> SumDist:
    """Exact law of the sum of n independent copies of the gap indicator.

    Computed by repeated squaring of the base law under discrete
    convolution, renormalizing after every convolution and recording the
    pre-renormalization drift.
    """
    if not isinstance(dist, TernaryDist):
        raise ValidationError(
            f"expected a TernaryDist, got {type(dist).__name__}")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"copy count n={n!r} must be an integer >= 1")
    if 2 * n + 1 > support_cap:
        raise ResourceLimitError(
            f"sum support 2n+1 = {2 * n + 1} exceeds cap {support_cap}")

    base = (-1, np.array([dist.y, dist.z, dist.x], dtype=np.float64))
    acc: tuple[int, np.ndarray] | None = None
    sq = base
    drift = 0.0
    remaining = n
    while True:
        if remaining & 1:
            if acc is None:
                acc = (sq[0], sq[1].copy())
            else:
                vec, drift = _normalized(np.convolve(acc[1], sq[1]), drift)
                acc = _trimmed(acc[0] + sq[0], vec)
        remaining >>= 1
        if remaining == 0:
            break
        vec, drift = _normalized(np.convolve(sq[1], sq[1]), drift)
        sq = _trimmed(2 * sq[0], vec)

    lo, vec = acc
    full = np.zeros(2 * n + 1, dtype=np.float64)
    full[lo + n:lo + n + vec.size] = vec
    return SumDist(n, full, drift)


def prob_positive(s: SumDist) -> float:
    """Pr(S > 0): mass strictly above zero.  A tie at zero is a failure."""
    return float(s.probs[s.n + 1:].sum())


def success_probability(params, k: int, m: int, *,
                        support_cap: int = DEFAULT_SUPPORT_CAP) -> float:
    """Probability that the better classifier strictly wins under the plan
    spending budget k at m labels per point (n = floor(k/m) points)."""
    plan = BudgetPlan.from_budget(k, m)
    dist = gap_distribution(aggregate(params, m))
    return prob_positive(sum_distribution(dist, plan.n, support_cap=support_cap))


Winner = Literal["single", "aggregate", "tie"]


@dataclass(frozen=True)
class ComparisonReport:
    """Head-to-head of the single-label plan against one m-label plan."""

    plan_single: BudgetPlan
    plan_agg: BudgetPlan
    p_success_single: float
    p_success_agg: float
    winner: Winner


def compare_strategies(params, k: int, m_list, *,
                       support_cap: int = DEFAULT_SUPPORT_CAP) -> list[ComparisonReport]:
    """Compare the m=1 baseline against each odd m in m_list, in ascending m.

    The baseline success probability is computed once and reused; winners
    are decided up to a tie tolerance of 1e-12.
    """
    ms = sorted(set(m_list))
    for m in ms:
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise ValidationError(f"m={m!r} must be an integer >= 1")
        if m % 2 == 0:
            raise ValidationError(f"m={m} must be odd")
        if m > k:
            raise ValidationError(
                f"m={m} exceeds budget k={k}: budget below one data point")
    p_single = success_probability(params, k, 1, support_cap=support_cap)
    plan_single = BudgetPlan.from_budget(k, 1)
    reports = []
    for m in ms:
        p_agg = success_probability(params, k, m, support_cap=support_cap)
        if p_single > p_agg + TIE_TOLERANCE:
            winner: Winner = "single"
        elif p_agg > p_single + TIE_TOLERANCE:
            winner = "aggregate"
        else:
            winner = "tie"
        reports.append(ComparisonReport(
            plan_single=plan_single,
            plan_agg=BudgetPlan.from_budget(k, m),
            p_success_single=p_single,
            p_success_agg=p_agg,
            winner=winner,
        ))
    return reports


def brute_force_sum(dist: TernaryDist, n: int) -> SumDist:
    """Exact law of the n-fold sum by enumerating all compositions
    (a, b, c) of n with multinomial weights.

    Independent oracle for ``sum_distribution``: shares no convolution code
    with it.  Enumeration is O(n^2) compositions, capped at n = 12.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"copy count n={n!r} must be an integer >= 1")
    if n > BRUTE_FORCE_MAX_N:
        raise ResourceLimitError(
            f"brute force enumeration capped at n = {BRUTE_FORCE_MAX_N}, got {n}")
    probs = np.zeros(2 * n + 1, dtype=np.float64)
    for a in range(n + 1):            # count of +1 draws
        for b in range(n - a + 1):    # count of -1 draws
            c = n - a - b
            weight = (math.comb(n, a) * math.comb(n - a, b)
                      * dist.x ** a * dist.y ** b * dist.z ** c)
            probs[a - b + n] += weight
    return SumDist(n, probs)


@dataclass(frozen=True)
class MonteCarloResult:
    """Sampled estimate of Pr(S > 0) with its binomial standard error."""

    estimate: float
    std_error: float
    trials: int
    seed: int


_MC_CHUNK = 1_000_000


def monte_carlo_success(dist: TernaryDist, n: int, trials: int,
                        seed: int) -> MonteCarloResult:
    """Empirical frequency of a strictly positive n-fold sum over seeded
    multinomial trials (PCG64; the seed is echoed for reproducibility)."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"copy count n={n!r} must be an integer >= 1")
    if trials < 1:
        raise ValidationError(f"trials={trials!r} must be >= 1")
    rng = np.random.default_rng(seed)
    pvals = [dist.x, dist.y, dist.z]
    wins = 0
    remaining = trials
    while remaining > 0:
        size = min(remaining, _MC_CHUNK)
        counts = rng.multinomial(n, pvals, size=size)
        wins += int(np.count_nonzero(counts[:, 0] > counts[:, 1]))
        remaining -= size
    estimate = wins / trials
    std_error = math.sqrt(estimate * (1.0 - estimate) / trials)
    return MonteCarloResult(estimate=estimate, std_error=std_error,
                            trials=trials, seed=seed)
