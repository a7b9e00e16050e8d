"""Bound families, the ternary rate, and the capacity planners.

The closed-form rate is cross-checked against the numeric Legendre
minimization on random laws; bound validity is checked against the exact
engine; capacity and sample-size numbers are frozen from hand arithmetic.
"""

import math
import warnings

import numpy as np
import pytest

from labelbudget import (
    DegenerateDistributionWarning,
    IndependentParams,
    TernaryDist,
    ValidationError,
    capacity,
    cramer_rate,
    gap_dist_independent,
    hoeffding_failure_bound,
    hoeffding_sqrt_condition,
    legendre_numeric,
    majority_prob,
    min_sample_size,
    prob_positive,
    rate_report,
    sum_distribution,
)
from labelbudget.gap_model import BudgetPlan

from conftest import random_ternary

FIG1_DIST = TernaryDist(0.1875, 0.1375, 0.675)
FIG2_DIST = TernaryDist(0.16, 0.154, 0.686)


class TestHoeffdingBound:
    def test_reference_value(self):
        # exp(-1500 * 0.05^2 / 2) = exp(-1.875)
        assert hoeffding_failure_bound(0.05, 1500) == pytest.approx(
            math.exp(-1.875), abs=1e-15)

    def test_vacuous_for_vanishing_mean(self):
        assert hoeffding_failure_bound(1e-12, 10) == pytest.approx(1.0, abs=1e-9)

    def test_hand_arithmetic(self):
        assert hoeffding_failure_bound(1.0, 2) == pytest.approx(
            math.exp(-1.0), abs=1e-15)

    def test_nonpositive_mean_rejected(self):
        with pytest.raises(ValidationError):
            hoeffding_failure_bound(0.0, 10)
        with pytest.raises(ValidationError):
            hoeffding_failure_bound(-0.1, 10)


class TestSqrtCondition:
    def test_three_voters_closed_form(self):
        # rhs = 1 + 2 q(1-q) = 1.375 at q = 0.75, below sqrt(3).
        cond = hoeffding_sqrt_condition(3, 0.75)
        assert cond.rhs == pytest.approx(1.375, abs=1e-15)
        assert cond.lhs == pytest.approx(math.sqrt(3), abs=1e-15)
        assert cond.holds

    def test_worst_case_limit(self):
        # rhs peaks at 1.5 as q -> 0.5, still below sqrt(3).
        cond = hoeffding_sqrt_condition(3, 0.5 + 1e-12)
        assert cond.rhs == pytest.approx(1.5, abs=1e-9)
        assert cond.holds

    def test_eleven_voters(self):
        assert hoeffding_sqrt_condition(11, 0.9).holds

    def test_half_rejected(self):
        with pytest.raises(ValidationError):
            hoeffding_sqrt_condition(3, 0.5)

    def test_even_m_rejected(self):
        with pytest.raises(ValidationError):
            hoeffding_sqrt_condition(4, 0.8)

    @pytest.mark.parametrize("m", range(3, 100, 2))
    def test_holds_everywhere(self, m):
        for i in range(1, 101):
            assert hoeffding_sqrt_condition(m, 0.5 + 0.005 * i).holds


class TestCramerRate:
    def test_symmetric_rate_is_zero(self):
        assert cramer_rate(TernaryDist(0.25, 0.25, 0.5)) == 0.0

    def test_reference_values(self):
        assert cramer_rate(FIG1_DIST) == pytest.approx(
            math.log(2 * math.sqrt(0.1875 * 0.1375) + 0.675), abs=1e-15)
        assert cramer_rate(FIG1_DIST) == pytest.approx(-0.0038767, abs=1e-7)
        assert cramer_rate(FIG2_DIST) == pytest.approx(
            math.log(2 * math.sqrt(0.16 * 0.154) + 0.686), abs=1e-15)

    def test_always_nonpositive(self, dist_grid):
        for dist in dist_grid:
            assert cramer_rate(dist) <= 0.0

    def test_am_gm(self, dist_grid):
        # 2 sqrt(xy) + z <= 1 with equality iff x = y.
        for dist in dist_grid:
            arg = 2 * math.sqrt(dist.x * dist.y) + dist.z
            assert arg <= 1.0 + 1e-15
        assert 2 * math.sqrt(0.2 * 0.2) + 0.6 == pytest.approx(1.0, abs=1e-15)

    def test_one_sided_law_returns_flagged_limit(self):
        dist = TernaryDist(0.4, 0.0, 0.6)
        with pytest.warns(DegenerateDistributionWarning):
            rate = cramer_rate(dist)
        assert rate == pytest.approx(math.log(0.6), abs=1e-15)


class TestLegendreNumeric:
    def test_symmetric_minimum_at_zero(self):
        result = legendre_numeric(TernaryDist(0.25, 0.25, 0.5))
        assert result.rate == pytest.approx(0.0, abs=1e-12)
        assert result.t_star == pytest.approx(0.0, abs=1e-9)

    def test_reference_minimizer(self):
        result = legendre_numeric(FIG1_DIST)
        assert result.t_star == pytest.approx(
            0.5 * math.log(0.1375 / 0.1875), abs=1e-9)
        assert result.rate == pytest.approx(cramer_rate(FIG1_DIST), abs=1e-9)

    def test_asymmetric_law(self):
        dist = TernaryDist(0.9, 0.05, 0.05)
        result = legendre_numeric(dist)
        assert result.rate == pytest.approx(
            math.log(2 * math.sqrt(0.9 * 0.05) + 0.05), abs=1e-9)

    def test_two_path_agreement_on_grid(self, rng):
        for _ in range(100):
            dist = random_ternary(rng)
            assert legendre_numeric(dist).rate == pytest.approx(
                cramer_rate(dist), abs=1e-9)

    def test_one_sided_law_rejected(self):
        with pytest.raises(ValidationError):
            legendre_numeric(TernaryDist(0.4, 0.0, 0.6))


class TestBoundValidity:
    def test_exact_below_both_bounds(self, positive_dist_grid):
        for dist in positive_dist_grid:
            rate = cramer_rate(dist)
            expectation = dist.expectation
            for n in (1, 3, 10, 50, 200):
                failure = 1.0 - prob_positive(sum_distribution(dist, n))
                assert failure <= math.exp(n * rate) + 1e-12
                assert failure <= hoeffding_failure_bound(expectation, n) + 1e-12

    def test_cramer_dominates_hoeffding(self):
        # For accurate labels the exponential rate beats E^2/2 by a wide
        # margin; at q -> 0.5 both bounds go vacuous together.
        for q in (0.55, 0.7, 0.9, 0.99):
            dist = gap_dist_independent(
                IndependentParams(p=0.7, epsilon=0.1, q=q))
            for n in (10, 100, 1000):
                assert (math.exp(n * cramer_rate(dist))
                        <= hoeffding_failure_bound(dist.expectation, n) + 1e-15)
        near_flat = gap_dist_independent(
            IndependentParams(p=0.7, epsilon=0.1, q=0.5 + 1e-9))
        assert math.exp(100 * cramer_rate(near_flat)) == pytest.approx(1.0, abs=1e-6)
        assert hoeffding_failure_bound(near_flat.expectation, 100) == pytest.approx(
            1.0, abs=1e-6)

    @pytest.mark.parametrize("m", [3, 5, 11])
    @pytest.mark.parametrize("q", [0.55, 0.75, 0.95])
    def test_hoeffding_strategy_ordering(self, m, q):
        # Success lower bound with mn single labels beats n aggregated:
        # failure bound ordering B(single, mn) < B(agg, n).
        params = IndependentParams(p=0.7, epsilon=0.1, q=q)
        n = 100
        single = gap_dist_independent(params)
        agg = gap_dist_independent(
            IndependentParams(p=0.7, epsilon=0.1, q=majority_prob(q, m)))
        assert (hoeffding_failure_bound(single.expectation, m * n)
                < hoeffding_failure_bound(agg.expectation, n))

    @pytest.mark.parametrize("m", [3, 5, 7, 9, 11])
    def test_rate_ordering(self, m):
        # Per-budget decay: m copies at single-label accuracy beat one copy
        # at aggregated accuracy, strictly inside (0.5, 1).
        for q in (0.55, 0.7, 0.85, 0.99):
            single = gap_dist_independent(
                IndependentParams(p=0.7, epsilon=0.1, q=q))
            agg = gap_dist_independent(IndependentParams(
                p=0.7, epsilon=0.1, q=majority_prob(q, m)))
            assert m * cramer_rate(single) < cramer_rate(agg)
        # Boundary q = 1: M_m(1) = 1, both sides collapse to equality.
        single = gap_dist_independent(
            IndependentParams(p=0.7, epsilon=0.1, q=1.0))
        assert m * cramer_rate(single) == pytest.approx(
            cramer_rate(single) * m, abs=1e-15)


class TestCapacity:
    def test_reference_configuration(self):
        report = capacity(FIG1_DIST, 1500, 0.05)
        assert 16 <= report.max_comparisons_cramer <= 18
        assert report.models_cramer >= 17
        assert report.max_comparisons_hoeffding == 0
        assert report.models_hoeffding == 1

    def test_symmetric_law_has_no_capacity(self):
        report = capacity(TernaryDist(0.3, 0.3, 0.4), 1000, 0.1)
        assert report.max_comparisons_hoeffding == 0
        assert report.max_comparisons_cramer == 0

    def test_growth_rate_per_sample(self):
        # Each extra sample multiplies Cramer capacity by exp(-rate).
        rate = cramer_rate(FIG1_DIST)
        factor = math.exp(-rate)
        previous = capacity(FIG1_DIST, 2000, 0.05).max_comparisons_cramer
        for n in (2001, 2002, 2003):
            current = capacity(FIG1_DIST, n, 0.05).max_comparisons_cramer
            assert current / previous == pytest.approx(factor, rel=1e-2)
            previous = current

    def test_huge_n_does_not_overflow(self):
        report = capacity(FIG1_DIST, 10_000_000, 0.05)
        assert report.max_comparisons_cramer > 10**100

    def test_delta_domain(self):
        with pytest.raises(ValidationError):
            capacity(FIG1_DIST, 100, 0.0)
        with pytest.raises(ValidationError):
            capacity(FIG1_DIST, 100, 1.0)


class TestMinSampleSize:
    def test_capacity_inversion(self):
        # 17 rankable models = 16 comparisons fit within the reference
        # budget of 1500; one more comparison does not.
        assert min_sample_size(FIG1_DIST, 0.05, 16, "cramer") <= 1500
        assert min_sample_size(FIG1_DIST, 0.05, 17, "cramer") > 1500

    def test_hand_arithmetic_hoeffding(self):
        # ceil(2 log 20 / 0.0025) = 2397 for E = 0.05.
        dist = TernaryDist(0.5 + 0.025, 0.5 - 0.025, 0.0)
        n = min_sample_size(dist, 0.05, 1, "hoeffding")
        assert n == 2397
        assert hoeffding_failure_bound(0.05, n) <= 0.05
        assert hoeffding_failure_bound(0.05, n - 1) > 0.05

    def test_vacuous_tolerance(self):
        assert min_sample_size(FIG1_DIST, 1.0, 1, "cramer") == 1
        assert min_sample_size(FIG1_DIST, 1.0, 1, "hoeffding") == 1

    def test_minimality(self, positive_dist_grid):
        for dist in positive_dist_grid[:5]:
            rate = -cramer_rate(dist)
            for k, delta in ((1, 0.05), (10, 0.2), (100, 0.01)):
                n = min_sample_size(dist, delta, k, "cramer")
                assert k * math.exp(-n * rate) <= delta
                assert n == 1 or k * math.exp(-(n - 1) * rate) > delta

    def test_degenerate_inputs_rejected(self):
        with pytest.raises(ValidationError):
            min_sample_size(TernaryDist(0.3, 0.3, 0.4), 0.05, 1, "cramer")
        with pytest.raises(ValidationError):
            min_sample_size(TernaryDist(0.2, 0.3, 0.5), 0.05, 1, "hoeffding")
        with pytest.raises(ValidationError):
            min_sample_size(FIG1_DIST, 0.05, 1, "chebyshev")


class TestRateReport:
    def test_consistent_fields(self):
        plan = BudgetPlan(k=200, m=1, n=200)
        report = rate_report(FIG1_DIST, plan)
        assert report.n == 200
        assert report.cramer_failure_bound == pytest.approx(
            math.exp(200 * report.cramer_rate), abs=1e-15)
        assert report.exact_failure <= report.cramer_failure_bound + 1e-12
        assert report.exact_failure <= report.hoeffding_failure_bound + 1e-12

    def test_hoeffding_absent_for_nonpositive_mean(self):
        report = rate_report(TernaryDist(0.2, 0.3, 0.5),
                             BudgetPlan(k=50, m=1, n=50))
        assert report.hoeffding_failure_bound is None

    def test_exact_optional(self):
        report = rate_report(FIG1_DIST, BudgetPlan(k=50, m=1, n=50),
                             include_exact=False)
        assert report.exact_failure is None


class TestDegenerateLaws:
    def test_warning_suppressed_in_composites(self):
        # capacity and rate_report consume the flagged limit internally.
        dist = TernaryDist(0.4, 0.0, 0.6)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            capacity(dist, 100, 0.05)
            rate_report(dist, BudgetPlan(k=10, m=1, n=10))

    def test_limit_rate_bounds_the_degenerate_failure(self):
        # With y = 0 the only failure event is the all-zero draw z^n, which
        # the limit rate log(z) reproduces exactly.
        dist = TernaryDist(0.4, 0.0, 0.6)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rate = cramer_rate(dist)
        for n in (1, 5, 20):
            failure = 1.0 - prob_positive(sum_distribution(dist, n))
            assert failure == pytest.approx(math.exp(n * rate), abs=1e-12)
