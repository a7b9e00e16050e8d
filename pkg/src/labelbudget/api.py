"""Request envelope parsing and the handlers behind every endpoint.

The CLI and the HTTP service both funnel through ``dispatch``: the CLI
builds an envelope from flags, the service parses one from a JSON body, and
from there the code path (and therefore the serialized output) is shared.
Every response carries the echoed input and the library version.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import __version__
from .bounds import capacity, min_sample_size, rate_report
from .errors import ResourceLimitError, ValidationError
from .exact import (
    compare_strategies,
    monte_carlo_success,
    success_probability,
    sum_distribution,
)
from .gap_model import (
    BudgetPlan,
    CorrelatedParams,
    IndependentParams,
    aggregate,
    gap_distribution,
)
from .serialize import to_jsonable
from .sweep import figure_data

__all__ = ["ComputeLimits", "EnvelopeError", "parse_envelope", "dispatch",
           "ENDPOINTS"]


@dataclass(frozen=True)
class ComputeLimits:
    """Per-request caps enforced by the service (None = uncapped, CLI)."""

    max_n: int | None = None
    max_grid: int | None = None


class EnvelopeError(ValidationError):
    """Malformed request body; carries field-level messages."""

    def __init__(self, fields: dict[str, str]):
        self.fields = fields
        super().__init__("; ".join(f"{k}: {v}" for k, v in sorted(fields.items())))


_INDEPENDENT_FIELDS = ("p", "epsilon", "q")
_CORRELATED_FIELDS = ("p_w", "p_b0", "p_b1", "q_b", "q_w")


def _as_float(raw, field: str, errors: dict[str, str]) -> float | None:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        errors[field] = f"expected a number, got {raw!r}"
        return None
    return float(raw)


def _as_int(raw, field: str, errors: dict[str, str]) -> int | None:
    if isinstance(raw, bool) or not isinstance(raw, int):
        errors[field] = f"expected an integer, got {raw!r}"
        return None
    return raw


def parse_envelope(body) -> dict:
    """Validate the raw JSON body shape; returns the normalized envelope.

    Shape errors (wrong types, unknown mode, missing parameter fields) are
    collected into one EnvelopeError with per-field messages.  Range
    violations are left to the parameter constructors so the CLI and
    service report them identically.
    """
    errors: dict[str, str] = {}
    if not isinstance(body, dict):
        raise EnvelopeError({"body": "expected a JSON object"})
    mode = body.get("mode", "independent")
    if mode not in ("independent", "correlated"):
        errors["mode"] = f"expected 'independent' or 'correlated', got {mode!r}"
    params_raw = body.get("params", {})
    if not isinstance(params_raw, dict):
        errors["params"] = "expected an object"
        params_raw = {}
    plan_raw = body.get("plan", {})
    if not isinstance(plan_raw, dict):
        errors["plan"] = "expected an object"
        plan_raw = {}
    options_raw = body.get("options", {})
    if not isinstance(options_raw, dict):
        errors["options"] = "expected an object"
        options_raw = {}

    params: dict[str, float] = {}
    if mode in ("independent", "correlated"):
        wanted = (_INDEPENDENT_FIELDS if mode == "independent"
                  else _CORRELATED_FIELDS)
        for name in wanted:
            if name in params_raw:
                value = _as_float(params_raw[name], f"params.{name}", errors)
                if value is not None:
                    params[name] = value
        for name in params_raw:
            if name not in wanted:
                errors[f"params.{name}"] = f"unknown field for mode {mode!r}"

    plan: dict[str, int] = {}
    for name in ("k", "m", "n"):
        if name in plan_raw and plan_raw[name] is not None:
            value = _as_int(plan_raw[name], f"plan.{name}", errors)
            if value is not None:
                plan[name] = value

    options: dict = {}
    for name in ("delta", "m_list", "mc_trials", "seed", "comparisons",
                 "bound", "include_exact", "figure", "ranges", "trials"):
        if name in options_raw and options_raw[name] is not None:
            options[name] = options_raw[name]
    if "delta" in options:
        _as_float(options["delta"], "options.delta", errors)
    if "m_list" in options:
        if (not isinstance(options["m_list"], list)
                or not all(isinstance(m, int) and not isinstance(m, bool)
                           for m in options["m_list"])):
            errors["options.m_list"] = "expected a list of integers"
    for name in ("mc_trials", "seed", "comparisons", "trials"):
        if name in options:
            _as_int(options[name], f"options.{name}", errors)

    if errors:
        raise EnvelopeError(errors)
    return {"mode": mode, "params": params, "plan": plan, "options": options}


def _build_params(env: dict):
    mode = env["mode"]
    fields = (_INDEPENDENT_FIELDS if mode == "independent"
              else _CORRELATED_FIELDS)
    missing = [f for f in fields if f not in env["params"]]
    if missing:
        raise ValidationError(
            f"missing {mode} parameter field(s): {', '.join(missing)}")
    cls = IndependentParams if mode == "independent" else CorrelatedParams
    return cls(**env["params"])


def _require_plan_n(env: dict) -> int:
    plan = env["plan"]
    if "n" in plan:
        return plan["n"]
    if "k" in plan:
        return BudgetPlan.from_budget(plan["k"], plan.get("m", 1)).n
    raise ValidationError("plan.n or plan.k is required")


def _cap_n(n: int, limits: ComputeLimits) -> None:
    if limits.max_n is not None and n > limits.max_n:
        raise ResourceLimitError(
            f"n={n} exceeds the per-request compute cap {limits.max_n}")


def _dist_payload(env: dict, limits: ComputeLimits) -> dict:
    params = _build_params(env)
    dist = gap_distribution(params)
    result = {"x": dist.x, "y": dist.y, "z": dist.z,
              "expectation": dist.expectation}
    if env["mode"] == "correlated":
        result["assumption1_satisfied"] = params.assumption1_satisfied
    m = env["plan"].get("m")
    if m is not None and m != 1:
        agg = gap_distribution(aggregate(params, m))
        result["aggregated"] = {"m": m, "x": agg.x, "y": agg.y, "z": agg.z,
                                "expectation": agg.expectation}
    return result


def _exact_payload(env: dict, limits: ComputeLimits) -> dict:
    params = _build_params(env)
    plan = env["plan"]
    if "k" not in plan:
        raise ValidationError("plan.k (label budget) is required")
    m = plan.get("m", 1)
    budget = BudgetPlan.from_budget(plan["k"], m)
    _cap_n(budget.n, limits)
    p = success_probability(params, plan["k"], m)
    return {"plan": to_jsonable(budget), "p_success": p,
            "p_failure": 1.0 - p}


def _compare_payload(env: dict, limits: ComputeLimits) -> dict:
    params = _build_params(env)
    plan = env["plan"]
    if "k" not in plan:
        raise ValidationError("plan.k (label budget) is required")
    m_list = env["options"].get("m_list")
    if m_list is None:
        m_list = [plan["m"]] if "m" in plan else [3]
    _cap_n(plan["k"], limits)
    reports = compare_strategies(params, plan["k"], m_list)
    return {"reports": to_jsonable(reports)}


def _bounds_payload(env: dict, limits: ComputeLimits) -> dict:
    params = _build_params(env)
    dist = gap_distribution(params)
    n = _require_plan_n(env)
    plan = env["plan"]
    budget = (BudgetPlan.from_budget(plan["k"], plan.get("m", 1))
              if "k" in plan else BudgetPlan(k=n, m=1, n=n))
    include_exact = bool(env["options"].get("include_exact", True))
    if include_exact:
        _cap_n(n, limits)
    report = rate_report(dist, budget, include_exact=include_exact)
    return to_jsonable(report)


def _capacity_payload(env: dict, limits: ComputeLimits) -> dict:
    params = _build_params(env)
    dist = gap_distribution(params)
    n = _require_plan_n(env)
    delta = env["options"].get("delta")
    if delta is None:
        raise ValidationError("options.delta is required")
    return to_jsonable(capacity(dist, n, float(delta)))


def _samplesize_payload(env: dict, limits: ComputeLimits) -> dict:
    params = _build_params(env)
    dist = gap_distribution(params)
    delta = env["options"].get("delta")
    if delta is None:
        raise ValidationError("options.delta is required")
    comparisons = env["options"].get("comparisons", 1)
    bound = env["options"].get("bound")
    if bound is not None and bound not in ("hoeffding", "cramer"):
        raise ValidationError(
            f"options.bound must be 'hoeffding' or 'cramer', got {bound!r}")
    result: dict = {"comparisons": comparisons, "delta": float(delta)}
    for family in ("hoeffding", "cramer") if bound is None else (bound,):
        try:
            result[f"n_{family}"] = min_sample_size(
                dist, float(delta), comparisons, family)
        except ValidationError as exc:
            if bound is not None:
                raise
            result[f"n_{family}"] = None
            result[f"{family}_note"] = str(exc)
    return result


def _figdata_payload(env: dict, limits: ComputeLimits) -> dict:
    figure = env["options"].get("figure")
    if not figure:
        raise ValidationError("options.figure is required")
    ranges = env["options"].get("ranges") or {}
    if not isinstance(ranges, dict):
        raise ValidationError("options.ranges must be an object")
    table = figure_data(figure, ranges,
                        max_rows=limits.max_grid, max_n=limits.max_n)
    return to_jsonable(table)


def _mc_payload(env: dict, limits: ComputeLimits) -> dict:
    params = _build_params(env)
    plan = env["plan"]
    if "k" not in plan:
        raise ValidationError("plan.k (label budget) is required")
    m = plan.get("m", 1)
    budget = BudgetPlan.from_budget(plan["k"], m)
    _cap_n(budget.n, limits)
    trials = env["options"].get("trials", env["options"].get("mc_trials", 10_000))
    seed = env["options"].get("seed", 0)
    dist = gap_distribution(aggregate(params, m))
    result = monte_carlo_success(dist, budget.n, trials, seed)
    return {"plan": to_jsonable(budget), **to_jsonable(result)}


ENDPOINTS = {
    "dist": _dist_payload,
    "exact": _exact_payload,
    "compare": _compare_payload,
    "bounds": _bounds_payload,
    "capacity": _capacity_payload,
    "samplesize": _samplesize_payload,
    "figdata": _figdata_payload,
    "mc": _mc_payload,
}


def dispatch(endpoint: str, env: dict,
             limits: ComputeLimits = ComputeLimits()) -> dict:
    """Run one endpoint against a parsed envelope.

    Returns the full response body: version, input echo, and result.
    """
    handler = ENDPOINTS.get(endpoint)
    if handler is None:
        raise ValidationError(f"unknown endpoint {endpoint!r}")
    result = handler(env, limits)
    return {"version": __version__, "input": env, "result": result}
