"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines and timings.  Every tolerance is pinned here; nothing is deferred.
"""

import math
import os
import time

import numpy as np
import pytest

from labelbudget import (
    IndependentParams,
    TernaryDist,
    brute_force_sum,
    capacity,
    cramer_rate,
    hoeffding_failure_bound,
    hoeffding_sqrt_condition,
    legendre_numeric,
    majority_prob,
    monte_carlo_success,
    prob_positive,
    sigma,
    success_probability,
    sum_distribution,
)
from labelbudget.sweep import SweepConfig, run_sweep

from conftest import random_ternary

FIG1_DIST = TernaryDist(0.1875, 0.1375, 0.675)


def report(name: str, ok: bool, elapsed: float, budget: float, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    extra = f" ({detail})" if detail else ""
    print(f"[{status}] {name}: {elapsed:.2f}s of {budget:.0f}s budget{extra}")
    assert ok, f"{name}{extra}"
    assert elapsed < budget, f"{name} exceeded its {budget:.0f}s runtime budget"


def test_fig1_reproduction():
    """Capacity at n=1500, delta=0.05: Cramer 16-18 comparisons (>=17
    models), Hoeffding none."""
    start = time.time()
    result = capacity(FIG1_DIST, 1500, 0.05)
    ok = (16 <= result.max_comparisons_cramer <= 18
          and result.models_cramer >= 17
          and result.max_comparisons_hoeffding == 0)
    report("fig1-capacity", ok, time.time() - start, 1.0,
           f"cramer={result.max_comparisons_cramer} comparisons, "
           f"models={result.models_cramer}, "
           f"hoeffding={result.max_comparisons_hoeffding}")


def test_fig2_dominance():
    """Single label beats m in {3,5} for every q on a 0.01 grid at k=1500."""
    start = time.time()
    worst = math.inf
    for i in range(1, 51):
        q = 0.5 + 0.01 * i
        params = IndependentParams(p=0.8, epsilon=0.01, q=q)
        p1 = success_probability(params, 1500, 1)
        for m in (3, 5):
            worst = min(worst, p1 - success_probability(params, 1500, m))
    report("fig2-dominance", worst >= -1e-9, time.time() - start, 120.0,
           f"worst margin {worst:.3e}")


def test_oracle_equivalence():
    """sum_distribution vs brute-force enumeration, 20 dists x n in 1..8."""
    start = time.time()
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        dist = random_ternary(rng)
        for n in range(1, 9):
            gap = float(np.abs(sum_distribution(dist, n).probs
                               - brute_force_sum(dist, n).probs).max())
            worst = max(worst, gap)
    report("oracle-equivalence", worst <= 1e-12, time.time() - start, 10.0,
           f"max-norm {worst:.3e}")


def test_bound_validity():
    """Exact failure never exceeds either bound, 20 dists x n in 1..200."""
    start = time.time()
    rng = np.random.default_rng(11)
    ok = True
    for _ in range(20):
        dist = random_ternary(rng, positive_mean=True)
        rate = cramer_rate(dist)
        expectation = dist.expectation
        for n in range(1, 201):
            failure = 1.0 - prob_positive(sum_distribution(dist, n))
            if (failure > math.exp(n * rate) + 1e-12
                    or failure > hoeffding_failure_bound(expectation, n) + 1e-12):
                ok = False
    report("bound-validity", ok, time.time() - start, 60.0)


def test_two_path_cramer():
    """Closed-form rate equals numeric Legendre minimization to 1e-9."""
    start = time.time()
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(100):
        dist = random_ternary(rng)
        worst = max(worst, abs(cramer_rate(dist) - legendre_numeric(dist).rate))
    report("two-path-cramer", worst <= 1e-9, time.time() - start, 5.0,
           f"max gap {worst:.3e}")


def test_sqrt_condition():
    """sqrt(m) beats the aggregation gain ratio for odd m in 3..99,
    q on a 0.005 grid over (0.5, 1]."""
    start = time.time()
    ok = True
    for m in range(3, 100, 2):
        for i in range(1, 101):
            if not hoeffding_sqrt_condition(m, 0.5 + 0.005 * i).holds:
                ok = False
    report("sqrt-m-condition", ok, time.time() - start, 10.0)


def test_sigma_identity_and_stirling_cap():
    """M_m(q) = q + (2q-1) sigma(m,q) to 1e-12 and the Stirling cap on
    1 + 2 sigma, odd m <= 99."""
    start = time.time()
    ok = True
    for m in range(1, 100, 2):
        cap = 1 + (2 * math.sqrt((m - 1) / 2) - 1) / math.sqrt(math.pi) if m >= 3 else None
        for i in range(1, 101):
            q = 0.5 + 0.005 * i
            if abs(majority_prob(q, m) - (q + (2 * q - 1) * sigma(m, q))) > 1e-12:
                ok = False
            if cap is not None and 1 + 2 * sigma(m, q) > cap + 1e-12:
                ok = False
    report("sigma-identity-stirling", ok, time.time() - start, 10.0)


def test_desk_scale_sweep(tmp_path):
    """Resolution-0.05 grid, n in 1..11, m in {3,11}: no substantive
    dominance violations under assumption 1; single label wins 55-80% of
    the label-bias (q_w > q_b) records."""
    start = time.time()
    config = SweepConfig(
        n_values=tuple(range(1, 12)),
        m_values=(3, 11),
        grid_resolution=0.05,
        output_path=str(tmp_path / "acceptance.csv"),
        workers=os.cpu_count(),
    )
    summary = run_sweep(config)
    frac = summary["frac_single_wins_qw_gt_qb"]
    ok = (summary["completed"]
          and summary["violations_a1_substantive"] == 0
          and 0.55 <= frac <= 0.80)
    report("desk-scale-sweep", ok, time.time() - start, 1800.0,
           f"records={summary['total']}, "
           f"a1-substantive={summary['violations_a1_substantive']}, "
           f"qw>qb single-win fraction={frac:.3f}")


def test_monte_carlo_consistency():
    """50 random configurations at 1e5 trials: MC within 4 standard errors
    of exact in at least 48.

    Configurations are drawn from the regime where the plug-in binomial
    standard error is a meaningful yardstick (exact probability away from
    0 and 1); a saturated configuration returns estimate 1.0 with standard
    error 0, against which no correct sampler can be scored.
    """
    start = time.time()
    rng = np.random.default_rng(17)
    within = 0
    done = 0
    while done < 50:
        dist = random_ternary(rng)
        n = int(rng.integers(1, 400))
        exact = prob_positive(sum_distribution(dist, n))
        if not 0.02 <= exact <= 0.98:
            continue
        mc = monte_carlo_success(dist, n, 100_000, seed=1000 + done)
        if abs(mc.estimate - exact) <= 4 * mc.std_error:
            within += 1
        done += 1
    report("monte-carlo-consistency", within >= 48, time.time() - start, 300.0,
           f"{within}/50 within 4 standard errors")
