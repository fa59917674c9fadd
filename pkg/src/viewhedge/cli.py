"""Command-line front end.

Commands: greeks, hedge, analyze-variance, simulate, sweep. Configuration
comes from a TOML file (--config), the built-in benchmark defaults
(--paper-defaults), and --section.key=value overrides, applied in that order.

Exit codes: 0 success, 1 validation/config error, 2 runtime error. Output
files are byte-reproducible for a fixed config and seed; the one timestamp
comment line can be dropped with --no-timestamp.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from datetime import datetime, timezone

from . import mc
from .config import (
    OUTPUT_DIR_ENV,
    apply_overrides,
    benchmark_defaults,
    build_run_config,
    build_strategies,
    load_toml,
    merge,
)
from .errors import ConfigError, DegenerateDenominatorError, DomainError
from .greeks import GREEK_NAMES, greeks
from .heatmap import render_heatmap
from .hedge import lambda2_star, lambda_star, n_bsm, n_generic, n_mastinsek, n_star
from .variance import coefficients, minimize_f, var_delta_h

COMMANDS = ("greeks", "hedge", "analyze-variance", "simulate", "sweep")


def _fmt(x: float) -> str:
    """17 significant digits: decimal text that round-trips float64."""
    return format(float(x), ".17g")


class _Parser(argparse.ArgumentParser):
    # report usage problems as config errors (exit 1) instead of exiting hard
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="viewhedge", add_help=True, description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="|".join(COMMANDS))
    for name in COMMANDS:
        p = sub.add_parser(name, add_help=True)
        p.add_argument("--config", metavar="PATH", help="TOML configuration file")
        p.add_argument("--paper-defaults", action="store_true",
                       help="start from the built-in benchmark configuration")
        p.add_argument("--output-dir", metavar="DIR",
                       help=f"where files go (default: config, then ${OUTPUT_DIR_ENV}, then .)")
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp comment line from output files")
        p.add_argument("--workers", type=int, default=1,
                       help="worker threads for simulation (results identical for any count)")
    return parser


def _timestamp_line() -> str:
    return f"# generated {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n"


def _csv_text(header: str, rows, with_timestamp: bool) -> str:
    buf = io.StringIO()
    if with_timestamp:
        buf.write(_timestamp_line())
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header.split(","))
    writer.writerows(rows)
    return buf.getvalue()


def _write(path: str, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _resolve_output_dir(args, run_config) -> str:
    directory = args.output_dir or run_config.output_dir or os.environ.get(OUTPUT_DIR_ENV) or "."
    os.makedirs(directory, exist_ok=True)
    return directory


def _cmd_greeks(args, data, rc) -> int:
    g = greeks(rc.option)
    print(f"price = {_fmt(g.price)}")
    for name in GREEK_NAMES:
        print(f"{name} = {_fmt(getattr(g, name))}")
    return 0


def _ratio_lines(label: str, ratio) -> list[str]:
    return [
        f"{label}: n_shares = {_fmt(ratio.n_shares)}",
        f"    base = {_fmt(ratio.base)}  drift = {_fmt(ratio.drift_term)}"
        f"  time_decay = {_fmt(ratio.time_decay_term)}"
        f"  vol_drift = {_fmt(ratio.vol_drift_term)}"
        f"  vol_convexity = {_fmt(ratio.vol_convexity_term)}",
    ]


def _cmd_hedge(args, data, rc) -> int:
    option, view = rc.option, rc.view
    g = greeks(option)
    for strat in build_strategies(data):
        if strat.kind == "BSM":
            ratio = n_bsm(g)
        elif strat.kind == "Mastinsek":
            ratio = n_mastinsek(g, view, option.spot, option.rate)
        elif strat.kind == "Star":
            ratio = n_star(g, view, option.spot, option.rate)
        else:
            ratio = n_generic(g, view, strat.lam1, strat.lam2)
        for line in _ratio_lines(strat.label, ratio):
            print(line)
    for label, fn in (("lambda_star", lambda: lambda_star(g, view, option.spot, option.rate)),
                      ("lambda2_star(0)", lambda: lambda2_star(g, view, option.spot,
                                                               option.rate, 0.0))):
        try:
            print(f"{label} = {_fmt(fn())}")
        except DegenerateDenominatorError as exc:
            print(f"{label}: undefined ({exc})")
    return 0


def _cmd_analyze_variance(args, data, rc) -> int:
    outdir = _resolve_output_dir(args, rc)
    option, view = rc.option, rc.view
    c = coefficients(greeks(option), view, option.spot, option.rate)

    rows = []
    for l1 in rc.lambda1_grid:
        for l2 in rc.lambda2_grid:
            rows.append((_fmt(l1), _fmt(l2), _fmt(var_delta_h(c, l1, l2))))
    grid_path = os.path.join(outdir, "variance_grid.csv")
    _write(grid_path, _csv_text("lambda1,lambda2,f", rows, not args.no_timestamp))
    print(f"wrote {grid_path}")

    try:
        line = minimize_f(c)
    except DegenerateDenominatorError as exc:
        print(f"minimizer line: undefined ({exc})")
        return 0
    line_rows = [(_fmt(l1), _fmt(line.lambda2_at(l1)), _fmt(line.min_value))
                 for l1 in rc.lambda1_grid]
    line_path = os.path.join(outdir, "minimizer_line.csv")
    _write(line_path, _csv_text("lambda1,lambda2_star,f_on_line", line_rows,
                                not args.no_timestamp))
    print(f"wrote {line_path}")
    print(f"lambda2_star(lambda1) = {_fmt(line.intercept)} + {_fmt(line.slope)} * lambda1")
    print(f"min_f = {_fmt(line.min_value)}")
    return 0


def _cmd_simulate(args, data, rc) -> int:
    outdir = _resolve_output_dir(args, rc)
    result = mc.estimate_errors(rc.sim, n_workers=args.workers)
    rows = [(s.strategy, _fmt(s.mahe), _fmt(s.mahe_stderr), _fmt(s.mshe),
             _fmt(s.mshe_stderr), _fmt(s.mean_dh)) for s in result.stats]
    path = os.path.join(outdir, "simulate.csv")
    _write(path, _csv_text("strategy,mahe,mahe_stderr,mshe,mshe_stderr,mean_dh",
                           rows, not args.no_timestamp))
    print(f"wrote {path}")
    for s in result.stats:
        print(f"{s.strategy}: mahe = {_fmt(s.mahe)} +/- {_fmt(s.mahe_stderr)}"
              f"  mshe = {_fmt(s.mshe)} +/- {_fmt(s.mshe_stderr)}")
    print(f"paths = {result.config.n_paths}, wall_time = {result.wall_time:.2f}s")
    return 0


def _cmd_sweep(args, data, rc) -> int:
    outdir = _resolve_output_dir(args, rc)
    result = mc.sweep(rc.sim, rc.mu_grid, rc.mu_sigma_grid, n_workers=args.workers)

    specs = (
        ("sweep_bsm_minus_star", "BSM - Star MAHE difference",
         lambda c: (c.mahe_bsm, c.diff_bsm_star, c.diff_bsm_star_stderr)),
        ("sweep_mastinsek_minus_star", "Mastinsek - Star MAHE difference",
         lambda c: (c.mahe_mastinsek, c.diff_mastinsek_star, c.diff_mastinsek_star_stderr)),
    )
    n_ms = len(result.mu_sigma_grid)
    for stem, title, pick in specs:
        rows = []
        for cell in result.cells:
            mahe_a, diff, stderr = pick(cell)
            rows.append((_fmt(cell.mu), _fmt(cell.mu_sigma), _fmt(mahe_a),
                         _fmt(cell.mahe_star), _fmt(diff), _fmt(stderr)))
        path = os.path.join(outdir, stem + ".csv")
        _write(path, _csv_text("mu,mu_sigma,mahe_a,mahe_b,diff,diff_stderr",
                               rows, not args.no_timestamp))
        print(f"wrote {path}")
        if "svg" in rc.formats:
            matrix = [[pick(result.cell(i, j))[1] for j in range(n_ms)]
                      for i in range(len(result.mu_grid))]
            svg_path = os.path.join(outdir, stem + ".svg")
            _write(svg_path, render_heatmap(result.mu_grid, result.mu_sigma_grid,
                                            matrix, title))
            print(f"wrote {svg_path}")
    print(f"cells = {len(result.cells)}, wall_time = {result.wall_time:.2f}s")
    return 0


_HANDLERS = {
    "greeks": _cmd_greeks,
    "hedge": _cmd_hedge,
    "analyze-variance": _cmd_analyze_variance,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        if args.command is None:
            raise ConfigError(f"missing command; expected one of {', '.join(COMMANDS)}")
        if args.workers < 1:
            raise ConfigError(f"--workers: must be >= 1, got {args.workers}")

        data: dict = benchmark_defaults() if args.paper_defaults else {}
        if args.config:
            data = merge(data, load_toml(args.config))
        data = apply_overrides(data, extra)
        rc = build_run_config(data, args.command)
        return _HANDLERS[args.command](args, data, rc)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failures: I/O, arithmetic, internal
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
