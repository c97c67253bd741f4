"""Command-line frontend.

Subcommands: ``single`` (one-execution sweep), ``two-exec`` (overlap
sweep), ``solve`` (minimum spectator count for a loss budget), and
``validate`` (brute-force cross-checks of the closed forms).  Reports
are emitted as CSV or JSON with full round-trip precision; ``--plot``
renders a PNG figure alongside the delimited output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .distributions import (
    DEFAULT_TRUNCATION,
    DiscreteUniform,
    DistributionSpec,
    LogNormal,
    Normal,
    Poisson,
)
from .errors import LeakwiseError
from .oracle import FiniteScenario, awae_enumerated, attacker_independence_spread
from .single_execution import ScenarioConfig, awae, loss_report, solve_min_spectators
from .two_execution import overlap_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_VALIDATION = 4


def _parse_kv(body: str) -> dict[str, str]:
    out = {}
    if not body:
        return out
    for i, part in enumerate(body.split(",")):
        if "=" not in part:
            raise ValueError(f"expected key=value at field {i} of {body!r}")
        key, _, val = part.partition("=")
        out[key.strip()] = val.strip()
    return out


def parse_distribution(text: str) -> DistributionSpec:
    """Parse the ``family:key=val,key=val`` distribution mini-grammar."""
    family, _, body = text.partition(":")
    kv = _parse_kv(body)
    try:
        if family == "poisson":
            return Poisson(lam=float(kv.pop("lambda")))
        if family == "uniform":
            return DiscreteUniform(n_values=int(kv.pop("N")))
        if family == "normal":
            return Normal(mu=float(kv.pop("mu", "0")), sigma2=float(kv.pop("sigma2")))
        if family == "lognormal":
            return LogNormal(mu=float(kv.pop("mu")), sigma2=float(kv.pop("sigma2")))
    except KeyError as exc:
        raise ValueError(f"distribution {text!r} is missing parameter {exc}") from exc
    raise ValueError(f"unknown distribution family {family!r}")


def parse_range(text: str) -> range:
    """Parse ``a..b`` (inclusive) or a single count."""
    if ".." in text:
        lo_s, _, hi_s = text.partition("..")
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return range(lo, hi + 1)
    value = int(text)
    return range(value, value + 1)


def _format_value(value):
    if isinstance(value, float):
        return repr(value)
    return value


def _emit(rows: list[dict], columns: list[str], fmt: str, output: str | None) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_value(row[c]) for c in columns])
        text = buf.getvalue()
    else:
        text = (
            json.dumps([{c: row[c] for c in columns} for row in rows], indent=2)
            + "\n"
        )
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _plot_path(output: str) -> str:
    stem, _, _ = output.rpartition(".")
    return (stem or output) + ".png"


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("LEAKWISE_THREADS", "1")))
    except ValueError:
        return 1


def _run_single(args) -> int:
    dist = parse_distribution(args.dist)
    ns = list(parse_range(args.spectators))

    def point(n: int):
        return loss_report(ScenarioConfig(dist, args.targets, n), args.threshold)

    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(point, ns))
    else:
        reports = [point(n) for n in ns]

    rows = [
        {
            "n": n,
            "h_before": r.before,
            "h_after": r.after,
            "abs_loss": r.absolute_loss,
            "rel_loss": r.relative_loss,
        }
        for n, r in zip(ns, reports)
    ]
    _emit(rows, ["n", "h_before", "h_after", "abs_loss", "rel_loss"], args.format, args.output)
    if args.plot:
        if not args.output:
            raise ValueError("--plot requires --output to name the figure file")
        from .plotting import plot_single_sweep

        plot_single_sweep(reports, _plot_path(args.output), title=args.dist)
    return EXIT_OK


def _run_two_exec(args) -> int:
    points = overlap_sweep(args.sigma2, args.targets, args.spectators, args.participation)
    rows = [
        {
            "s0": p.s0,
            "s1": p.s1,
            "s2": p.s2,
            "overlap": p.overlap,
            "h_before": p.prior_entropy,
            "h_after_first": p.after_first,
            "h_after_second": p.after_second,
            "second_loss_ratio": p.second_loss_ratio,
        }
        for p in points
    ]
    _emit(
        rows,
        [
            "s0",
            "s1",
            "s2",
            "overlap",
            "h_before",
            "h_after_first",
            "h_after_second",
            "second_loss_ratio",
        ],
        args.format,
        args.output,
    )
    if args.plot:
        if not args.output:
            raise ValueError("--plot requires --output to name the figure file")
        from .plotting import plot_overlap_sweep

        plot_overlap_sweep(points, _plot_path(args.output), title=args.participation)
    return EXIT_OK


def _run_solve(args) -> int:
    dist = parse_distribution(args.dist)
    n = solve_min_spectators(dist, args.targets, args.budget, args.threshold)
    sys.stdout.write(f"{n}\n")
    return EXIT_OK


def _run_validate(args) -> int:
    family, _, body = args.scenario.partition(":")
    kv = _parse_kv(body)
    a = int(kv.pop("a", "1"))
    t = int(kv.pop("t", "1"))
    s = int(kv.pop("s", "1"))
    dist_text = family
    if kv:
        dist_text += ":" + ",".join(f"{k}={v}" for k, v in kv.items())
    dist = parse_distribution(dist_text)

    scenario = FiniteScenario.from_spec(dist, a, t, s, args.threshold)
    spread = attacker_independence_spread(scenario)
    x_a = tuple([scenario.values[0]] * a)
    enumerated = awae_enumerated(scenario, x_a)
    closed = awae(ScenarioConfig(dist, t, s), args.threshold)
    delta = abs(enumerated - closed)

    spread_tol = 1e-9 if isinstance(dist, DiscreteUniform) else 1e-6
    ok = spread < spread_tol and delta < 1e-6
    record = {
        "scenario": args.scenario,
        "attacker_independence_spread": spread,
        "spread_tolerance": spread_tol,
        "awae_enumerated": enumerated,
        "awae_closed_form": closed,
        "closed_form_delta": delta,
        "closed_form_tolerance": 1e-6,
        "status": "pass" if ok else "fail",
    }
    text = json.dumps(record, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_VALIDATION


def _add_common(parser):
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--output", help="write the report here instead of stdout")
    parser.add_argument(
        "--threshold",
        type=float,
        default=DEFAULT_TRUNCATION,
        help="PMF truncation threshold for infinite-support tabulation",
    )
    parser.add_argument("--seed", type=int, default=42)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leakwise",
        description="Entropy loss from revealing a secure sum/average output",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_single = sub.add_parser("single", help="one-execution spectator sweep")
    p_single.add_argument("--dist", help="family:key=val,... e.g. poisson:lambda=4")
    p_single.add_argument("--targets", type=int, default=1)
    p_single.add_argument("--spectators", default="1..32", help="count or a..b")
    p_single.add_argument("--plot", action="store_true", help="render a PNG beside the output")
    p_single.add_argument("--config", help="JSON file supplying these same keys")
    _add_common(p_single)
    p_single.set_defaults(func=_run_single)

    p_two = sub.add_parser("two-exec", help="two-execution overlap sweep")
    p_two.add_argument("--sigma2", type=float, default=4.0)
    p_two.add_argument("--targets", type=int, default=1)
    p_two.add_argument("--spectators", type=int, default=10, help="spectators per execution")
    p_two.add_argument("--participation", choices=["twice", "once"], default="twice")
    p_two.add_argument("--plot", action="store_true", help="render a PNG beside the output")
    _add_common(p_two)
    p_two.set_defaults(func=_run_two_exec)

    p_solve = sub.add_parser("solve", help="minimum spectators for a loss budget")
    p_solve.add_argument("--dist", required=True)
    p_solve.add_argument("--targets", type=int, default=1)
    p_solve.add_argument("--budget", type=float, required=True)
    _add_common(p_solve)
    p_solve.set_defaults(func=_run_solve)

    p_val = sub.add_parser("validate", help="brute-force cross-checks")
    p_val.add_argument(
        "--scenario",
        required=True,
        help="family:params plus counts, e.g. uniform:N=16,a=1,t=1,s=1",
    )
    _add_common(p_val)
    p_val.set_defaults(func=_run_validate)

    return parser


def _apply_config(args) -> None:
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        for key, value in loaded.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                raise ValueError(f"unknown config key {key!r}")
            # Explicit command-line flags win over the config file.
            if f"--{key}" not in sys.argv:
                setattr(args, attr, value)
    if getattr(args, "dist", None) is None and hasattr(args, "dist"):
        raise ValueError("a distribution must be given via --dist or --config")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except (LeakwiseError, ValueError, OSError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(record) + "\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
