"""Command-line front end.

Reports are ``[section]`` headers followed by ``key = value`` lines; reals are
printed with 12 significant digits.  Warnings go to stderr and never change the
report or the exit code.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field

from . import analytics, approx, growth
from .distribution import mean, read_distribution, second_moment, variance
from .errors import KellyError, OutsideSurvivalInterval, SupportOutOfUnitRange, ZeroVariance
from .simulate import SimulationConfig, simulate_paths


def render_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


@dataclass
class Report:
    sections: dict[str, dict[str, object]] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def add(self, section: str, key: str, value) -> None:
        entries = self.sections.setdefault(section, {})
        if key in entries:
            raise KeyError(f"duplicate key {key!r} in section [{section}]")
        entries[key] = value

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    def render(self) -> str:
        blocks = []
        for name, entries in self.sections.items():
            lines = [f"[{name}]"] + [f"{k} = {render_value(v)}" for k, v in entries.items()]
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"


def _describe(report: Report, d) -> None:
    report.add("distribution", "atoms", len(d))
    report.add("distribution", "mean", mean(d))
    report.add("distribution", "second_moment", second_moment(d))
    report.add("distribution", "variance", variance(d))
    report.add("distribution", "x_min", d.x_min)
    report.add("distribution", "x_max", d.x_max)


def _add_interval(report: Report, interval: growth.SurvivalInterval) -> None:
    report.add("survival", "lower", interval.lower)
    report.add("survival", "upper", interval.upper)


def _outside_warning(name: str, k: float, interval: growth.SurvivalInterval) -> str:
    return f"{name} {k:.12g} is outside survival interval {interval}; ruin is possible"


def cmd_solve(dist_file, lo: float | None = None, hi: float | None = None, cash: bool = False) -> Report:
    d = read_distribution(dist_file)
    if cash:
        lo = -1.0 if lo is None else lo
        hi = 1.0 if hi is None else hi
    lo = -math.inf if lo is None else lo
    hi = math.inf if hi is None else hi

    report = Report()
    _describe(report, d)
    _add_interval(report, growth.survival_interval(d))
    report.add("constraint", "lo", lo)
    report.add("constraint", "hi", hi)

    res = growth.solve_exact(d, (lo, hi))
    report.add("solution", "k_star", res.k_star)
    report.add("solution", "g_star", res.g_star)
    report.add("solution", "at_constraint_boundary", res.at_constraint_boundary)
    report.add("solution", "bracket_lo", res.bracket[0])
    report.add("solution", "bracket_hi", res.bracket[1])
    report.add("solution", "iterations", res.iterations)

    try:
        verdict = growth.attractiveness_check(d).value
    except SupportOutOfUnitRange:
        verdict = "n/a (support not inside (-1, 1))"
    report.add("attractiveness", "cash_financed", verdict)
    return report


def cmd_approx(dist_file, merton: bool = False, no_saturate: bool = False,
               margin: float = growth.ENDPOINT_MARGIN) -> Report:
    d = read_distribution(dist_file)
    interval = growth.survival_interval(d)
    report = Report()
    _describe(report, d)
    _add_interval(report, interval)

    raw = approx.kelly_taylor(d)
    report.add("taylor", "kelly_taylor", raw)
    report.add("taylor", "quadratic_peak", approx.taylor_peak_value(d))
    report.add("taylor", "survivable", interval.contains(raw))
    report.add("taylor", "log_growth", growth.log_growth(d, raw))
    if not interval.contains(raw):
        report.warn(_outside_warning("kelly_taylor", raw, interval))
    if not no_saturate:
        sat = approx.saturate(raw, interval, margin)
        report.add("taylor", "margin", margin)
        report.add("taylor", "saturated", sat)
        report.add("taylor", "saturated_log_growth", growth.log_growth(d, sat))

    if merton:
        try:
            k_m = approx.kelly_merton(d)
        except ZeroVariance as exc:
            report.add("merton", "kelly_merton", f"unavailable: {exc}")
        else:
            report.add("merton", "kelly_merton", k_m)
            report.add("merton", "survivable", interval.contains(k_m))
            if not interval.contains(k_m):
                report.warn(_outside_warning("kelly_merton", k_m, interval))
            if not no_saturate:
                report.add("merton", "saturated", approx.saturate(k_m, interval, margin))
    return report


def cmd_analyze(dist_file, k: float | None = None, n: int = 1, v0: float = 1.0) -> Report:
    d = read_distribution(dist_file)
    interval = growth.survival_interval(d)
    source = "given"
    if k is None:
        k, source = approx.kelly_taylor(d), "kelly_taylor"

    report = Report()
    report.add("input", "k", k)
    report.add("input", "k_source", source)
    report.add("input", "n", n)
    report.add("input", "v0", v0)
    _add_interval(report, interval)
    report.add("survival", "k_survives", interval.contains(k))
    if not interval.contains(k):
        report.warn(_outside_warning("k", k, interval))

    report.add("performance", "log_growth", growth.log_growth(d, k))
    report.add("performance", "jensen_bound", analytics.jensen_bound(d, k))
    report.add("performance", "best_performance_bound", analytics.best_performance_bound(d))
    try:
        report.add("performance", "merton_performance_bound", analytics.merton_performance_bound(d))
    except ZeroVariance as exc:
        report.add("performance", "merton_performance_bound", f"unavailable: {exc}")

    report.add("expected_gain", "expected_gain", analytics.expected_gain(d, k, n, v0))
    n_max = max(n, 2)
    report.add("expected_gain", "monotone_horizon", n_max)
    report.add("expected_gain", "nonnegative_nondecreasing", analytics.expected_gain_monotone_check(d, k, n_max))

    report.add("gain_variance", "gain_variance", analytics.gain_variance(d, k, n, v0))

    try:
        report.add("log_growth_variance", "log_growth_variance", analytics.log_growth_variance(d, k, n))
    except OutsideSurvivalInterval as exc:
        report.add("log_growth_variance", "log_growth_variance", f"unavailable: {exc}")
    return report


def cmd_gap(dist_file, k_approx: float | None = None, margin: float = growth.ENDPOINT_MARGIN) -> Report:
    d = read_distribution(dist_file)
    interval = growth.survival_interval(d)
    res = growth.solve_exact(d)
    source = "given"
    if k_approx is None:
        k_approx, source = approx.saturate(approx.kelly_taylor(d), interval, margin), "saturated kelly_taylor"

    g_star = res.g_star
    g_approx = growth.log_growth(d, k_approx)
    true_gap = 0.0 if res.k_star == k_approx else g_star - g_approx
    jensen = analytics.gap_upper_bound(d, res.k_star, k_approx)
    vertex = analytics.fractional_vertex_bound(res.k_star, k_approx, d.x_min, d.x_max)
    log_vertex = math.log(vertex)

    report = Report()
    _add_interval(report, interval)
    report.add("gains", "k_star", res.k_star)
    report.add("gains", "k_approx", k_approx)
    report.add("gains", "k_approx_source", source)
    report.add("growth", "g_star", g_star)
    report.add("growth", "g_approx", g_approx)
    report.add("gap", "true_gap", true_gap)
    report.add("gap", "jensen_bound", jensen)
    report.add("gap", "vertex_bound", vertex)
    report.add("gap", "log_vertex_bound", log_vertex)
    slack = 1e-10
    holds = -slack <= true_gap <= jensen + slack and jensen <= log_vertex + slack
    report.add("gap", "sandwich_holds", holds)
    if not holds:
        report.warn("ordering 0 <= true_gap <= jensen_bound <= log_vertex_bound is violated")
    return report


def cmd_simulate(dist_file, k: float | None = None, n: int = 1, v0: float = 1.0, paths: int = 10_000,
                 seed: int = 0, csv_path=None, threads: int = 1) -> Report:
    d = read_distribution(dist_file)
    interval = growth.survival_interval(d)
    source = "given"
    if k is None:
        k, source = approx.kelly_taylor(d), "kelly_taylor"
    cfg = SimulationConfig(k=k, horizon=n, v0=v0, paths=paths, seed=seed)
    sim = simulate_paths(d, cfg, workers=threads)

    report = Report()
    report.add("input", "k", k)
    report.add("input", "k_source", source)
    report.add("input", "n", n)
    report.add("input", "v0", v0)
    report.add("input", "paths", paths)
    report.add("input", "seed", seed)
    _add_interval(report, interval)
    report.add("survival", "k_survives", interval.contains(k))
    if not interval.contains(k):
        report.warn(_outside_warning("k", k, interval))

    report.add("ruin", "ruin_paths", sim.ruin_paths)
    report.add("ruin", "ruin_fraction", sim.ruin_fraction)
    report.add("ruin", "min_account_value", sim.min_account_value)

    report.add("gain", "empirical_mean", sim.empirical_gain_mean)
    report.add("gain", "mean_stderr", sim.gain_mean_stderr)
    report.add("gain", "closed_form_mean", analytics.expected_gain(d, k, n, v0))
    report.add("gain", "empirical_variance", sim.empirical_gain_variance)
    report.add("gain", "variance_stderr", sim.gain_variance_stderr)
    report.add("gain", "closed_form_variance", analytics.gain_variance(d, k, n, v0))

    report.add("log_growth", "surviving_paths", sim.surviving_paths)
    report.add("log_growth", "empirical_mean_per_stage", sim.empirical_log_growth_mean)
    report.add("log_growth", "mean_stderr", sim.log_growth_mean_stderr)
    report.add("log_growth", "closed_form_mean_per_stage", growth.log_growth(d, k))
    report.add("log_growth", "empirical_variance", sim.empirical_log_growth_variance)
    try:
        report.add("log_growth", "closed_form_variance", analytics.log_growth_variance(d, k, n))
    except OutsideSurvivalInterval as exc:
        report.add("log_growth", "closed_form_variance", f"unavailable: {exc}")

    for q, value in sim.terminal_quantiles.items():
        report.add("terminal_quantiles", f"q{round(q * 100):02d}", value)

    if csv_path is not None:
        write_paths_csv(csv_path, sim.terminal_values, sim.ruined)
    return report


def write_paths_csv(path, terminal_values, ruined) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["path", "terminal_value", "ruined"])
        for i, (v, r) in enumerate(zip(terminal_values.tolist(), ruined.tolist())):
            writer.writerow([i, repr(v), int(r)])


def _real(text: str) -> float:
    value = float(text)
    if math.isnan(value):
        raise argparse.ArgumentTypeError("NaN is not allowed")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logkelly", description="Log-optimal betting gains and their risk analytics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="exact maximizer of E[log(1 + K X)]")
    p.add_argument("dist_file")
    p.add_argument("--lo", type=_real)
    p.add_argument("--hi", type=_real)
    p.add_argument("--cash", action="store_true", help="constrain K to [-1, 1]")

    p = sub.add_parser("approx", help="Taylor (quadratic) approximate gain")
    p.add_argument("dist_file")
    p.add_argument("--merton", action="store_true", help="also report mu / sigma^2")
    p.add_argument("--no-saturate", action="store_true")
    p.add_argument("--margin", type=_real, default=growth.ENDPOINT_MARGIN)

    p = sub.add_parser("analyze", help="closed-form gain, variance and log-growth statistics")
    p.add_argument("dist_file")
    p.add_argument("--k", type=_real, help="feedback gain (default: Taylor gain)")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--v0", type=_real, default=1.0)

    p = sub.add_parser("gap", help="performance gap between exact and approximate gains")
    p.add_argument("dist_file")
    p.add_argument("--k-approx", type=_real, help="override the saturated Taylor gain")
    p.add_argument("--margin", type=_real, default=growth.ENDPOINT_MARGIN)

    p = sub.add_parser("simulate", help="seeded Monte Carlo of the account recursion")
    p.add_argument("dist_file")
    p.add_argument("--k", type=_real, help="feedback gain (default: Taylor gain)")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--v0", type=_real, default=1.0)
    p.add_argument("--paths", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", dest="csv_path", help="write per-path terminal values here")
    p.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
    return parser


def run(args: argparse.Namespace) -> Report:
    if args.command == "solve":
        return cmd_solve(args.dist_file, args.lo, args.hi, args.cash)
    if args.command == "approx":
        return cmd_approx(args.dist_file, args.merton, args.no_saturate, args.margin)
    if args.command == "analyze":
        return cmd_analyze(args.dist_file, args.k, args.n, args.v0)
    if args.command == "gap":
        return cmd_gap(args.dist_file, args.k_approx, args.margin)
    return cmd_simulate(args.dist_file, args.k, args.n, args.v0, args.paths, args.seed, args.csv_path, args.threads)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except KellyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(report.render())
    for message in report.warnings:
        print(f"warning: {message}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
