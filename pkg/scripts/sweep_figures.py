#!/usr/bin/env python3
"""Produce the (mu, mu_sigma) sweep heatmaps of strategy MAHE differences.

Runs the BSM-Star and Mastinsek-Star comparison over a square grid of drift
views, then writes one CSV and one SVG heatmap per comparison. The defaults
(51x51 grid, 1e5 paths) take a few minutes; pass --points 21 --paths 10000
for a quick look.

Usage:
    python scripts/sweep_figures.py [--points N] [--paths N] [--seed S]
                                    [--workers W] [--output-dir DIR]
"""
import argparse
import os
import sys
import time

from viewhedge import (
    LinearDrift,
    MarketView,
    OptionSpec,
    SimConfig,
    Strategy,
    render_heatmap,
    sweep,
)

OPTION = OptionSpec(spot=100.0, strike=100.0, rate=0.05, vol_hat=0.2,
                    maturity=0.1)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=51,
                        help="grid points per axis over [-0.5, 0.5]")
    parser.add_argument("--paths", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=20260814)
    parser.add_argument("--workers", type=int, default=4)
    parser.add_argument("--output-dir", default="sweep_out")
    args = parser.parse_args(argv)

    pts = args.points
    grid = tuple(-0.5 + i * (1.0 / (pts - 1)) for i in range(pts)) if pts > 1 else (0.0,)
    view = MarketView(mu=0.05, dt=0.02,
                      vol_process=LinearDrift(mu_sigma=0.0, sigma0=0.2))
    config = SimConfig(option=OPTION, view=view, n_paths=args.paths,
                       seed=args.seed,
                       strategies=(Strategy.parse("BSM"), Strategy.parse("Star")),
                       sigma_mode="deterministic", n_substeps=1)

    start = time.perf_counter()
    result = sweep(config, grid, grid, n_workers=args.workers)
    print(f"{len(result.cells)} cells in {time.perf_counter() - start:.1f}s")

    os.makedirs(args.output_dir, exist_ok=True)
    comparisons = (
        ("sweep_bsm_minus_star", "BSM - Star MAHE difference",
         lambda c: (c.mahe_bsm, c.diff_bsm_star, c.diff_bsm_star_stderr)),
        ("sweep_mastinsek_minus_star", "Mastinsek - Star MAHE difference",
         lambda c: (c.mahe_mastinsek, c.diff_mastinsek_star,
                    c.diff_mastinsek_star_stderr)),
    )
    for stem, title, pick in comparisons:
        csv_path = os.path.join(args.output_dir, stem + ".csv")
        with open(csv_path, "w") as fh:
            fh.write("mu,mu_sigma,mahe_a,mahe_b,diff,diff_stderr\n")
            for cell in result.cells:
                mahe_a, diff, stderr = pick(cell)
                fh.write(f"{cell.mu:.17g},{cell.mu_sigma:.17g},{mahe_a:.17g},"
                         f"{cell.mahe_star:.17g},{diff:.17g},{stderr:.17g}\n")
        matrix = [[pick(result.cell(i, j))[1] for j in range(len(grid))]
                  for i in range(len(grid))]
        svg_path = os.path.join(args.output_dir, stem + ".svg")
        with open(svg_path, "w") as fh:
            fh.write(render_heatmap(result.mu_grid, result.mu_sigma_grid,
                                    matrix, title))
        print(f"wrote {csv_path} and {svg_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
