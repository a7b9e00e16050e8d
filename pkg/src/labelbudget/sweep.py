"""Grid sweep over the correlated accuracy parameters, plus figure tables.

The sweep walks (q_b, q_w, p_w, p_b0, p_b1) over an even grid on [0.5, 1],
keeps the tuples where the better classifier really has lower risk, and for
each kept tuple and each (n, m) compares the exact probability of
identifying the better classifier under mn single-label points against n
m-label points.  Records stream to CSV; a JSON summary counts violations of
single-label dominance, split into substantive ones and numerical noise
(both probabilities within 1e-9 of 1, where float cancellation dominates).

Work is chunked by parameter tuple and dispatched to a process pool; chunk
results are merged in grid order, so output is deterministic for a given
config and seed.  An append-only journal makes an interrupted sweep
resumable without recomputation.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ResourceLimitError, ValidationError
from .exact import monte_carlo_success, prob_positive, sum_distribution
from .gap_model import (
    TernaryDist,
    _correlated_xyz,
    _independent_xyz,
    majority_prob,
)
from .serialize import format_float, to_json

__all__ = [
    "SweepConfig",
    "SweepSummary",
    "FigureTable",
    "grid_points",
    "run_sweep",
    "figure_data",
    "FIGURES",
]

# A dominance violation below this is classified as numerical noise when
# both probabilities are saturated (within the same threshold of 1).
SUBSTANTIVE_DIFF = 1e-9
SATURATION_LEVEL = 1.0 - 1e-9

_BASE_COLUMNS = ("q_b", "q_w", "p_w", "p_b0", "p_b1", "n", "m",
                 "p_single", "p_agg", "diff", "assumption1", "violation")
_MC_COLUMNS = ("mc_single", "mc_se_single", "mc_agg", "mc_se_agg")


def grid_points(resolution: float, include_endpoint: bool = True) -> list[float]:
    """Even grid on [0.5, 1] with the given step.

    Published grid descriptions are ambiguous about whether the right
    endpoint belongs to the grid (50 points at step 0.01 stop at 0.99), so
    both conventions are supported: ``include_endpoint`` keeps 1.0.
    """
    if not 0.0 < resolution <= 0.5:
        raise ValidationError(f"resolution={resolution!r} outside (0, 0.5]")
    count = int(math.floor(0.5 / resolution + 1e-9))
    pts = [0.5 + i * resolution for i in range(count + 1)]
    if include_endpoint:
        if pts[-1] < 1.0 - 1e-12:
            pts.append(1.0)
    elif pts[-1] > 1.0 - 1e-12:
        pts.pop()
    return pts


@dataclass(frozen=True)
class SweepConfig:
    """Sweep extent and execution knobs.

    Desk-scale defaults (resolution 0.05, small n, m in {3, 11}) finish on a
    laptop; a full-scale grid is accepted only when its estimated record
    count stays under ``grid_cap``.
    """

    n_values: tuple[int, ...] = tuple(range(1, 12))
    m_values: tuple[int, ...] = (3, 11)
    grid_resolution: float = 0.05
    include_endpoint: bool = True
    tolerance: float = 1e-12
    mc_trials: int = 0
    seed: int = 0
    output_path: str = "sweep.csv"
    grid_cap: int = 10_000_000
    chunk_size: int = 512
    workers: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_values", tuple(sorted(set(self.n_values))))
        object.__setattr__(self, "m_values", tuple(sorted(set(self.m_values))))
        if not self.n_values or self.n_values[0] < 1:
            raise ValidationError("n_values must be integers >= 1")
        for m in self.m_values:
            if m < 1 or m % 2 == 0:
                raise ValidationError(f"m_values must be odd integers, got {m}")
        if not 0.0 < self.grid_resolution <= 0.5:
            raise ValidationError(
                f"grid_resolution={self.grid_resolution!r} outside (0, 0.5]")
        if self.tolerance < 0.0:
            raise ValidationError("tolerance must be nonnegative")
        if self.mc_trials < 0:
            raise ValidationError("mc_trials must be nonnegative")
        if self.chunk_size < 1:
            raise ValidationError("chunk_size must be >= 1")

    @property
    def config_hash(self) -> str:
        """Hash of the math-relevant fields; identifies resumable output."""
        payload = json.dumps({
            "n_values": self.n_values,
            "m_values": self.m_values,
            "grid_resolution": self.grid_resolution,
            "include_endpoint": self.include_endpoint,
            "tolerance": self.tolerance,
            "mc_trials": self.mc_trials,
            "seed": self.seed,
        }, sort_keys=True, default=list)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    @property
    def columns(self) -> tuple[str, ...]:
        return _BASE_COLUMNS + (_MC_COLUMNS if self.mc_trials > 0 else ())

    @property
    def summary_path(self) -> str:
        stem = re.sub(r"\.csv$", "", str(self.output_path))
        return stem + ".summary.json"

    @property
    def journal_path(self) -> str:
        return str(self.output_path) + ".journal"


@dataclass
class SweepSummary:
    """Aggregate counters over all records of one sweep."""

    total: int = 0
    skipped_infeasible: int = 0
    violations_a1: int = 0
    violations_all: int = 0
    violations_a1_substantive: int = 0
    violations_all_substantive: int = 0
    qw_gt_qb_records: int = 0
    qw_gt_qb_single_wins: int = 0
    seed: int = 0
    config_hash: str = ""
    completed: bool = True

    def merge(self, other: dict) -> None:
        self.total += other["total"]
        self.skipped_infeasible += other["skipped_infeasible"]
        self.violations_a1 += other["violations_a1"]
        self.violations_all += other["violations_all"]
        self.violations_a1_substantive += other["violations_a1_substantive"]
        self.violations_all_substantive += other["violations_all_substantive"]
        self.qw_gt_qb_records += other["qw_gt_qb_records"]
        self.qw_gt_qb_single_wins += other["qw_gt_qb_single_wins"]

    def as_dict(self) -> dict:
        frac = (self.qw_gt_qb_single_wins / self.qw_gt_qb_records
                if self.qw_gt_qb_records else None)
        return {
            "total": self.total,
            "skipped_infeasible": self.skipped_infeasible,
            "violations_a1": self.violations_a1,
            "violations_all": self.violations_all,
            "violations_a1_substantive": self.violations_a1_substantive,
            "violations_all_substantive": self.violations_all_substantive,
            "frac_single_wins_qw_gt_qb": frac,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "completed": self.completed,
        }


def _feasible(q_b: float, q_w: float, p_w: float, p_b0: float, p_b1: float) -> bool:
    return (1.0 - p_w) * p_b0 + p_w * p_b1 > p_w


def _fmt(value: float) -> str:
    return format_float(value)


def _process_chunk(args) -> tuple[list[str], dict]:
    """Compute all records for one chunk of parameter tuples.

    Returns formatted CSV lines (grid order) plus partial summary counters.
    Runs in worker processes; must stay picklable and side-effect free.
    """
    (chunk, chunk_start, n_values, m_values, tolerance,
     mc_trials, seed) = args
    lines: list[str] = []
    counters = {
        "total": 0, "skipped_infeasible": 0,
        "violations_a1": 0, "violations_all": 0,
        "violations_a1_substantive": 0, "violations_all_substantive": 0,
        "qw_gt_qb_records": 0, "qw_gt_qb_single_wins": 0,
    }
    for offset, (q_b, q_w, p_w, p_b0, p_b1) in enumerate(chunk):
        if not _feasible(q_b, q_w, p_w, p_b0, p_b1):
            counters["skipped_infeasible"] += 1
            continue
        tuple_index = chunk_start + offset
        base = TernaryDist(*_correlated_xyz(q_b, q_w, p_w, p_b0, p_b1))
        assumption1 = q_b >= q_w
        agg_dists = {
            m: TernaryDist(*_correlated_xyz(
                majority_prob(q_b, m), majority_prob(q_w, m), p_w, p_b0, p_b1))
            for m in m_values
        }
        single_cache: dict[int, float] = {}
        agg_cache: dict[tuple[int, int], float] = {}
        for n in n_values:
            for m in m_values:
                count = n * m
                p_single = single_cache.get(count)
                if p_single is None:
                    p_single = prob_positive(sum_distribution(base, count))
                    single_cache[count] = p_single
                p_agg = agg_cache.get((m, n))
                if p_agg is None:
                    p_agg = prob_positive(sum_distribution(agg_dists[m], n))
                    agg_cache[(m, n)] = p_agg
                diff = p_single - p_agg
                violation = diff < -tolerance
                substantive = (diff < -SUBSTANTIVE_DIFF
                               and not (p_single > SATURATION_LEVEL
                                        and p_agg > SATURATION_LEVEL))
                counters["total"] += 1
                if violation:
                    counters["violations_all"] += 1
                    if assumption1:
                        counters["violations_a1"] += 1
                if substantive:
                    counters["violations_all_substantive"] += 1
                    if assumption1:
                        counters["violations_a1_substantive"] += 1
                if q_w > q_b:
                    counters["qw_gt_qb_records"] += 1
                    if diff >= 0.0:
                        counters["qw_gt_qb_single_wins"] += 1
                cells = [
                    _fmt(q_b), _fmt(q_w), _fmt(p_w), _fmt(p_b0), _fmt(p_b1),
                    str(n), str(m),
                    _fmt(p_single), _fmt(p_agg), _fmt(diff),
                    "true" if assumption1 else "false",
                    "true" if violation else "false",
                ]
                if mc_trials > 0:
                    mc_s = monte_carlo_success(
                        base, count, mc_trials,
                        _record_seed(seed, tuple_index, n, m, 0))
                    mc_a = monte_carlo_success(
                        agg_dists[m], n, mc_trials,
                        _record_seed(seed, tuple_index, n, m, 1))
                    cells += [_fmt(mc_s.estimate), _fmt(mc_s.std_error),
                              _fmt(mc_a.estimate), _fmt(mc_a.std_error)]
                lines.append(",".join(cells))
    return lines, counters


def _record_seed(root: int, tuple_index: int, n: int, m: int, side: int) -> int:
    """Deterministic per-record seed, stable under chunking and resume."""
    ss = np.random.SeedSequence((root, tuple_index, n, m, side))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _chunk_args(config: SweepConfig, skip_chunks: int):
    pts = grid_points(config.grid_resolution, config.include_endpoint)
    tuples = itertools.product(pts, repeat=5)
    size = config.chunk_size
    index = 0
    while True:
        chunk = list(itertools.islice(tuples, size))
        if not chunk:
            return
        if index >= skip_chunks:
            yield (chunk, index * size, config.n_values, config.m_values,
                   config.tolerance, config.mc_trials, config.seed)
        index += 1


def _load_journal(config: SweepConfig) -> tuple[int, SweepSummary] | None:
    path = Path(config.journal_path)
    if not path.exists() or not Path(config.output_path).exists():
        return None
    try:
        state = json.loads(path.read_text())
    except (ValueError, OSError):
        return None
    if state.get("config_hash") != config.config_hash:
        return None
    summary = SweepSummary(seed=config.seed, config_hash=config.config_hash)
    summary.merge(state["counters"])
    return int(state["chunks_done"]), summary


def _write_journal(config: SweepConfig, chunks_done: int,
                   summary: SweepSummary) -> None:
    state = {
        "config_hash": config.config_hash,
        "chunks_done": chunks_done,
        "counters": {k: getattr(summary, k) for k in (
            "total", "skipped_infeasible", "violations_a1", "violations_all",
            "violations_a1_substantive", "violations_all_substantive",
            "qw_gt_qb_records", "qw_gt_qb_single_wins")},
    }
    tmp = config.journal_path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(state, fh)
    os.replace(tmp, config.journal_path)


def run_sweep(config: SweepConfig, *, max_chunks: int | None = None) -> dict:
    """Run (or resume) the sweep; returns the summary dict.

    Results stream to ``config.output_path`` as CSV, the summary lands next
    to it as JSON, and a journal file tracks chunk completion so that a
    killed sweep restarted with the same config skips finished work.
    ``max_chunks`` stops early after that many chunks (the journal then
    allows a later call to resume); the returned summary is marked
    ``completed: false`` in that case.
    """
    pts = grid_points(config.grid_resolution, config.include_endpoint)
    n_tuples = len(pts) ** 5
    estimated = n_tuples * len(config.n_values) * len(config.m_values)
    if estimated > config.grid_cap:
        raise ResourceLimitError(
            f"estimated grid of {estimated} records exceeds cap "
            f"{config.grid_cap}; use a coarser grid_resolution or raise grid_cap")

    resumed = _load_journal(config)
    if resumed is not None:
        chunks_done, summary = resumed
        mode = "a"
    else:
        chunks_done = 0
        summary = SweepSummary(seed=config.seed, config_hash=config.config_hash)
        mode = "w"

    total_chunks = -(-n_tuples // config.chunk_size)
    budget = total_chunks - chunks_done
    if max_chunks is not None:
        budget = min(budget, max_chunks)

    workers = config.workers if config.workers is not None else (os.cpu_count() or 1)
    args_iter = itertools.islice(_chunk_args(config, chunks_done), budget)

    with open(config.output_path, mode) as out:
        if mode == "w":
            out.write(",".join(config.columns) + "\n")
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = pool.map(_process_chunk, args_iter)
                for lines, counters in results:
                    summary.merge(counters)
                    if lines:
                        out.write("\n".join(lines) + "\n")
                    out.flush()
                    chunks_done += 1
                    _write_journal(config, chunks_done, summary)
        else:
            for args in args_iter:
                lines, counters = _process_chunk(args)
                summary.merge(counters)
                if lines:
                    out.write("\n".join(lines) + "\n")
                out.flush()
                chunks_done += 1
                _write_journal(config, chunks_done, summary)

    summary.completed = chunks_done >= total_chunks
    if summary.completed:
        with open(config.summary_path, "w") as fh:
            fh.write(to_json(summary.as_dict()) + "\n")
        if os.path.exists(config.journal_path):
            os.remove(config.journal_path)
    return summary.as_dict()


@dataclass(frozen=True)
class FigureTable:
    """Columnar data behind one figure; plotting is the caller's job."""

    figure: str
    columns: list[str]
    rows: list[list]


def _q_grid(step: float, *, closed_left: bool) -> list[float]:
    if not 0.0 < step <= 0.5:
        raise ValidationError(f"q step {step!r} outside (0, 0.5]")
    count = int(math.floor(0.5 / step + 1e-9))
    start = 0 if closed_left else 1
    pts = [0.5 + i * step for i in range(start, count + 1)]
    if not pts or pts[-1] < 1.0 - 1e-12:
        pts.append(1.0)
    return pts


def _n_grid(n_max: int, n_step: int) -> list[int]:
    if n_max < 1 or n_step < 1:
        raise ValidationError("n_max and n_step must be >= 1")
    values = list(range(n_step, n_max + 1, n_step))
    if not values or values[-1] != n_max:
        values.append(n_max)
    return values


def _success_for(p: float, epsilon: float, q: float, k: int, m: int,
                 support_cap: int) -> float:
    n = k // m
    dist = TernaryDist(*_independent_xyz(p, epsilon, majority_prob(q, m)))
    return prob_positive(sum_distribution(dist, n, support_cap=support_cap))


def _check_domain(ranges: dict) -> None:
    for key, lo, hi in (("p", 0.5, 1.0), ("q", 0.5, 1.0)):
        if key in ranges and not lo <= float(ranges[key]) <= hi:
            raise ValidationError(f"{key}={ranges[key]!r} outside [{lo}, {hi}]")
    if "epsilon" in ranges:
        eps = float(ranges["epsilon"])
        p = float(ranges.get("p", 0.5))
        if not (0.0 < eps and p + eps <= 1.0):
            raise ValidationError(f"epsilon={eps!r} outside (0, 1-p]")
    if "delta" in ranges and not 0.0 < float(ranges["delta"]) < 1.0:
        raise ValidationError(f"delta={ranges['delta']!r} outside (0, 1)")


def _fig1(ranges: dict, max_rows, max_n, support_cap) -> FigureTable:
    from .bounds import capacity

    p = float(ranges.get("p", 0.75))
    epsilon = float(ranges.get("epsilon", 0.1))
    q = float(ranges.get("q", 0.75))
    delta = float(ranges.get("delta", 0.05))
    n_max = int(ranges.get("n_max", 1500))
    n_step = int(ranges.get("n_step", 10))
    _cap_n("n_max", n_max, max_n)
    ns = _n_grid(n_max, n_step)
    _cap_rows(len(ns), max_rows)
    dist = TernaryDist(*_independent_xyz(p, epsilon, q))
    rows = []
    for n in ns:
        report = capacity(dist, n, delta)
        rows.append([n,
                     report.max_comparisons_hoeffding, report.models_hoeffding,
                     report.max_comparisons_cramer, report.models_cramer])
    return FigureTable("fig1",
                       ["n", "comparisons_hoeffding", "models_hoeffding",
                        "comparisons_cramer", "models_cramer"], rows)


def _fig2a(ranges: dict, max_rows, max_n, support_cap) -> FigureTable:
    p = float(ranges.get("p", 0.8))
    epsilon = float(ranges.get("epsilon", 0.01))
    k = int(ranges.get("k", 1500))
    q_step = float(ranges.get("q_step", 0.01))
    _cap_n("k", k, max_n)
    m_list = _m_list(ranges.get("m_list", (1, 3, 5)), k)
    qs = _q_grid(q_step, closed_left=False)
    _cap_rows(len(qs), max_rows)
    rows = []
    for q in qs:
        rows.append([q] + [_success_for(p, epsilon, q, k, m, support_cap)
                           for m in m_list])
    return FigureTable("fig2a",
                       ["q"] + [f"p_success_m{m}" for m in m_list], rows)


def _fig2b(ranges: dict, max_rows, max_n, support_cap) -> FigureTable:
    p = float(ranges.get("p", 0.8))
    epsilon = float(ranges.get("epsilon", 0.01))
    q = float(ranges.get("q", 0.8))
    k_values = [int(k) for k in ranges.get("k_values", range(100, 3001, 100))]
    _cap_n("k_values", max(k_values), max_n)
    m_list = _m_list(ranges.get("m_list", (1, 3, 5)), min(k_values))
    _cap_rows(len(k_values), max_rows)
    rows = []
    for k in k_values:
        rows.append([k] + [_success_for(p, epsilon, q, k, m, support_cap)
                           for m in m_list])
    return FigureTable("fig2b",
                       ["k"] + [f"p_success_m{m}" for m in m_list], rows)


def _fig3a(ranges: dict, max_rows, max_n, support_cap) -> FigureTable:
    from .bounds import cramer_rate

    p = float(ranges.get("p", 0.7))
    epsilon = float(ranges.get("epsilon", 0.1))
    q = float(ranges.get("q", 0.75))
    k_values = [int(k) for k in ranges.get("k_values", range(50, 2001, 50))]
    _cap_n("k_values", max(k_values), max_n)
    m_list = _m_list(ranges.get("m_list", (1, 3)), min(k_values))
    _cap_rows(len(k_values), max_rows)
    rates = {m: cramer_rate(TernaryDist(
        *_independent_xyz(p, epsilon, majority_prob(q, m)))) for m in m_list}
    rows = []
    for k in k_values:
        row: list = [k]
        for m in m_list:
            n = k // m
            dist = TernaryDist(*_independent_xyz(p, epsilon, majority_prob(q, m)))
            failure = 1.0 - prob_positive(
                sum_distribution(dist, n, support_cap=support_cap))
            row += [math.log(failure) / n if failure > 0.0 else -math.inf,
                    rates[m]]
        rows.append(row)
    columns = ["k"]
    for m in m_list:
        columns += [f"norm_log_failure_m{m}", f"cramer_rate_m{m}"]
    return FigureTable("fig3a", columns, rows)


def _fig3b(ranges: dict, max_rows, max_n, support_cap) -> FigureTable:
    from .bounds import cramer_rate

    p = float(ranges.get("p", 0.7))
    epsilon = float(ranges.get("epsilon", 0.1))
    q_step = float(ranges.get("q_step", 0.01))
    qs = _q_grid(q_step, closed_left=True)
    _cap_rows(len(qs), max_rows)
    rows = []
    for q in qs:
        dist = TernaryDist(*_independent_xyz(p, epsilon, q))
        expectation = dist.expectation
        rows.append([q, cramer_rate(dist),
                     -expectation * expectation / 2.0])
    return FigureTable("fig3b", ["q", "cramer_rate", "hoeffding_rate"], rows)


def _m_list(raw, k: int) -> list[int]:
    ms = sorted(set(int(m) for m in raw))
    for m in ms:
        if m < 1 or m % 2 == 0:
            raise ValidationError(f"m_list entries must be odd, got {m}")
        if m > k:
            raise ValidationError(f"m={m} exceeds the smallest budget {k}")
    return ms


def _cap_rows(rows: int, max_rows: int | None) -> None:
    if max_rows is not None and rows > max_rows:
        raise ResourceLimitError(
            f"figure table of {rows} rows exceeds the per-request cap {max_rows}")


def _cap_n(name: str, value: int, max_n: int | None) -> None:
    if max_n is not None and value > max_n:
        raise ResourceLimitError(
            f"{name}={value} exceeds the per-request cap {max_n}")


FIGURES = {
    "fig1": _fig1,
    "fig2a": _fig2a,
    "fig2b": _fig2b,
    "fig3a": _fig3a,
    "fig3b": _fig3b,
}


def figure_data(figure: str, ranges: dict | None = None, *,
                max_rows: int | None = None,
                max_n: int | None = None,
                support_cap: int = 1_000_000) -> FigureTable:
    """Columns exactly as plotted for the named figure.

    ``ranges`` overrides the figure's default parameter values and grids;
    unknown figure ids and out-of-domain overrides are validation errors.
    ``max_rows`` / ``max_n`` are the service's per-request compute caps.
    """
    builder = FIGURES.get(figure)
    if builder is None:
        raise ValidationError(
            f"unknown figure {figure!r}; expected one of {sorted(FIGURES)}")
    ranges = dict(ranges or {})
    _check_domain(ranges)
    return builder(ranges, max_rows, max_n, support_cap)
