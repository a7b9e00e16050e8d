"""Command-line front door.

Every computation subcommand builds a request envelope from its flags and
runs it through the same dispatch layer as the HTTP service, so the two
surfaces print identical JSON for identical inputs.

Exit codes: 0 success, 2 validation error, 3 resource cap, 64 usage.
"""

from __future__ import annotations

import argparse
import sys

from .api import ComputeLimits, dispatch
from .errors import ResourceLimitError, ValidationError
from .serialize import to_csv, to_json
from .sweep import SweepConfig, run_sweep

__all__ = ["cli_dispatch", "main"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3
EXIT_USAGE = 64


class _UsageExit(Exception):
    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    """argparse that signals usage problems instead of calling sys.exit(2)."""

    def error(self, message: str):
        raise _UsageExit(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("independent parameters")
    group.add_argument("--p", type=float, help="worse-classifier accuracy")
    group.add_argument("--eps", type=float, help="accuracy margin")
    group.add_argument("--q", type=float, help="single-label accuracy")
    group = parser.add_argument_group("correlated parameters")
    group.add_argument("--pw", type=float, help="worse-classifier accuracy")
    group.add_argument("--pb0", type=float,
                       help="better accuracy when worse is wrong")
    group.add_argument("--pb1", type=float,
                       help="better accuracy when worse is right")
    group.add_argument("--qb", type=float,
                       help="label accuracy on better-right-worse-wrong")
    group.add_argument("--qw", type=float,
                       help="label accuracy on worse-right-better-wrong")


def _add_format_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def _params_env(args) -> tuple[str, dict]:
    independent = {k: v for k, v in (("p", args.p), ("epsilon", args.eps),
                                     ("q", args.q)) if v is not None}
    correlated = {k: v for k, v in (("p_w", args.pw), ("p_b0", args.pb0),
                                    ("p_b1", args.pb1), ("q_b", args.qb),
                                    ("q_w", args.qw)) if v is not None}
    if independent and correlated:
        raise ValidationError(
            "give either --p/--eps/--q or --pw/--pb0/--pb1/--qb/--qw, not both")
    if correlated:
        return "correlated", correlated
    return "independent", independent


def _build_parser() -> _Parser:
    parser = _Parser(prog="labelbudget", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command",
                               parser_class=_Parser)

    p = sub.add_parser("dist",
                       help="gap-indicator distribution for the parameters")
    _add_param_flags(p)
    p.add_argument("--m", type=int, help="also report the m-label aggregate")
    _add_format_flag(p)

    p = sub.add_parser("exact",
                       help="exact success probability for one budget plan")
    _add_param_flags(p)
    p.add_argument("--budget", type=int, required=True, help="label budget k")
    p.add_argument("--m", type=int, default=1, help="labels per point")
    _add_format_flag(p)

    p = sub.add_parser("compare",
                       help="single-label vs m-label strategy comparison")
    _add_param_flags(p)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--m", type=int, action="append", required=True,
                   help="m value to compare against m=1 (repeatable)")
    _add_format_flag(p)

    p = sub.add_parser("bounds",
                       help="Hoeffding bound, Cramer rate, exact failure")
    _add_param_flags(p)
    p.add_argument("--n", type=int, help="number of test points")
    p.add_argument("--budget", type=int, help="label budget k (with --m)")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--no-exact", action="store_true",
                   help="skip the exact failure probability")
    _add_format_flag(p)

    p = sub.add_parser("capacity",
                       help="how many classifiers a test set can rank")
    _add_param_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    _add_format_flag(p)

    p = sub.add_parser("samplesize",
                       help="minimum n for a comparison count and tolerance")
    _add_param_flags(p)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--comparisons", type=int, default=1)
    p.add_argument("--bound", choices=("hoeffding", "cramer"))
    _add_format_flag(p)

    p = sub.add_parser("mc",
                       help="Monte Carlo estimate of the success probability")
    _add_param_flags(p)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    _add_format_flag(p)

    p = sub.add_parser("figdata",
                       help="columnar data behind one figure")
    p.add_argument("--figure", required=True,
                   choices=("fig1", "fig2a", "fig2b", "fig3a", "fig3b"))
    p.add_argument("--range", action="append", default=[], metavar="KEY=VALUE",
                   help="override a figure default, e.g. --range k=2000 "
                        "or --range m_list=1,3,5")
    _add_format_flag(p)

    p = sub.add_parser("sweep",
                       help="grid sweep of single- vs m-label dominance")
    p.add_argument("--resolution", type=float, default=0.05)
    p.add_argument("--n-values", default="1-11",
                   help="comma list and/or a-b spans, e.g. 1-11,100,101")
    p.add_argument("--m-values", default="3,11")
    p.add_argument("--no-endpoint", action="store_true",
                   help="exclude 1.0 from the parameter grid")
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.add_argument("--mc-trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="sweep.csv")
    p.add_argument("--grid-cap", type=int, default=10_000_000)
    p.add_argument("--chunk-size", type=int, default=512)
    p.add_argument("--workers", type=int)
    p.add_argument("--max-chunks", type=int,
                   help="stop after this many chunks (resume later)")

    p = sub.add_parser("serve",
                       help="run the JSON API and static UI server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8100)
    p.add_argument("--static",
                   help="directory of the built UI bundle to serve at /")

    return parser


def _parse_int_list(text: str) -> tuple[int, ...]:
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    if not values:
        raise ValidationError(f"empty integer list: {text!r}")
    return tuple(values)


def _parse_range_value(text: str):
    if "," in text:
        return [_parse_scalar(v) for v in text.split(",") if v.strip()]
    return _parse_scalar(text)


def _parse_scalar(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _envelope_from(args, *, plan: dict | None = None,
                   options: dict | None = None) -> dict:
    mode, params = _params_env(args)
    return {"mode": mode, "params": params,
            "plan": plan or {}, "options": options or {}}


def _run_command(args, out) -> int:
    command = args.command
    if command == "sweep":
        config = SweepConfig(
            n_values=_parse_int_list(args.n_values),
            m_values=_parse_int_list(args.m_values),
            grid_resolution=args.resolution,
            include_endpoint=not args.no_endpoint,
            tolerance=args.tolerance,
            mc_trials=args.mc_trials,
            seed=args.seed,
            output_path=args.out,
            grid_cap=args.grid_cap,
            chunk_size=args.chunk_size,
            workers=args.workers,
        )
        summary = run_sweep(config, max_chunks=args.max_chunks)
        out.write(to_json(summary) + "\n")
        return EXIT_OK
    if command == "serve":
        from .service import serve

        serve(args.host, args.port, static_dir=args.static)
        return EXIT_OK

    if command == "dist":
        env = _envelope_from(args, plan={"m": args.m} if args.m else {})
        body = dispatch("dist", env)
    elif command == "exact":
        env = _envelope_from(args, plan={"k": args.budget, "m": args.m})
        body = dispatch("exact", env)
    elif command == "compare":
        env = _envelope_from(args, plan={"k": args.budget},
                             options={"m_list": sorted(set(args.m))})
        body = dispatch("compare", env)
    elif command == "bounds":
        plan = {}
        if args.budget is not None:
            plan = {"k": args.budget, "m": args.m}
        elif args.n is not None:
            plan = {"n": args.n}
        env = _envelope_from(args, plan=plan,
                             options={"include_exact": not args.no_exact})
        body = dispatch("bounds", env)
    elif command == "capacity":
        env = _envelope_from(args, plan={"n": args.n},
                             options={"delta": args.delta})
        body = dispatch("capacity", env)
    elif command == "samplesize":
        options = {"delta": args.delta, "comparisons": args.comparisons}
        if args.bound:
            options["bound"] = args.bound
        env = _envelope_from(args, options=options)
        body = dispatch("samplesize", env)
    elif command == "mc":
        env = _envelope_from(args, plan={"k": args.budget, "m": args.m},
                             options={"trials": args.trials, "seed": args.seed})
        body = dispatch("mc", env)
    elif command == "figdata":
        ranges = {}
        for item in args.range:
            if "=" not in item:
                raise ValidationError(f"--range expects KEY=VALUE, got {item!r}")
            key, _, value = item.partition("=")
            ranges[key.strip()] = _parse_range_value(value)
        env = {"mode": "independent", "params": {}, "plan": {},
               "options": {"figure": args.figure, "ranges": ranges}}
        body = dispatch("figdata", env)
    else:
        raise _UsageExit("missing command\n" + _build_parser().format_usage())

    if args.format == "csv":
        out.write(to_csv(body["result"]))
    else:
        out.write(to_json(body) + "\n")
    return EXIT_OK


def cli_dispatch(argv, out=None, err=None) -> int:
    """Parse argv and run; returns the process exit code."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(err)
            return EXIT_USAGE
        return _run_command(args, out)
    except _UsageExit as exc:
        err.write(exc.message + "\n")
        return EXIT_USAGE
    except ValidationError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except ResourceLimitError as exc:
        err.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCE


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))
