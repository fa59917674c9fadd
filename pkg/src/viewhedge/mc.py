"""Seed-deterministic Monte Carlo for one-interval hedging errors.

Draw scheme: one counter-based generator block per (seed, substream, path
index), so any path's shocks can be regenerated in isolation and results do
not depend on evaluation order or worker count. Substream 0 drives the
underlying; substreams 1, 2, ... drive the vol substeps (substream 1 is the
vol shock z2 when a single step is taken).

All strategies are evaluated on the same paths; since the share count enters
the error linearly, per-path strategy differences are exact multiples of the
discounted spot move, which is what makes tiny cross-strategy differences
measurable at moderate path counts.
"""
from __future__ import annotations

import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import ndtri

from .errors import DomainError, MaturityExhaustedError
from .greeks import OptionSpec, call_price, greeks
from .hedge import MarketView, n_bsm, n_generic, n_mastinsek, n_star
from .vol_models import (
    CIR,
    LinearDrift,
    OrnsteinUhlenbeck,
    VOL_FLOOR,
    VolProcessSpec,
    start_coefficients,
    validate,
)

CHUNK_PATHS = 65536
_Z1_SUBSTREAM = 0
_VOL_SUBSTREAM_BASE = 1

SIGMA_MODES = ("deterministic", "stochastic")


def normal_draws(seed: int, substream: int, start: int, n: int) -> np.ndarray:
    """n standard normals at absolute indices [start, start+n).

    Pure function of (seed, substream, index): any chunking of an index range
    reproduces the same values.
    """
    gen = np.random.Philox(
        key=np.array([seed, substream], dtype=np.uint64),
        counter=np.array([start, 0, 0, 0], dtype=np.uint64),
    )
    raw = gen.random_raw(4 * n)[::4]  # first word of each counter block
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53
    return ndtri(u)


@dataclass(frozen=True)
class PathDraw:
    """The two independent shocks assigned to one path."""

    z1: float
    z2: float


def path_draw(seed: int, index: int) -> PathDraw:
    """Shocks for a single path, regenerated in isolation."""
    return PathDraw(
        z1=float(normal_draws(seed, _Z1_SUBSTREAM, index, 1)[0]),
        z2=float(normal_draws(seed, _VOL_SUBSTREAM_BASE, index, 1)[0]),
    )


@dataclass(frozen=True)
class Strategy:
    """A share-count rule; Generic carries its two lambda knobs."""

    kind: str
    lam1: float = 0.0
    lam2: float = 0.0

    _KINDS = ("BSM", "Mastinsek", "Star", "Generic")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise DomainError(f"strategy kind must be one of {self._KINDS}, got {self.kind!r}")

    @property
    def label(self) -> str:
        if self.kind == "Generic":
            return f"Generic({self.lam1:g},{self.lam2:g})"
        return self.kind

    @staticmethod
    def parse(text: str) -> "Strategy":
        t = text.strip()
        for kind in ("BSM", "Mastinsek", "Star"):
            if t.lower() == kind.lower():
                return Strategy(kind)
        m = re.fullmatch(r"(?i)generic\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)", t)
        if m:
            try:
                return Strategy("Generic", float(m.group(1)), float(m.group(2)))
            except ValueError:
                pass
        raise DomainError(
            f"unknown strategy {text!r}; expected BSM, Mastinsek, Star or Generic(lam1,lam2)"
        )


def share_count(strategy: Strategy, option: OptionSpec, view: MarketView) -> float:
    """Shares to short per option for the given strategy."""
    g = greeks(option)
    if strategy.kind == "BSM":
        return n_bsm(g).n_shares
    if strategy.kind == "Mastinsek":
        return n_mastinsek(g, view, option.spot, option.rate).n_shares
    if strategy.kind == "Star":
        return n_star(g, view, option.spot, option.rate).n_shares
    return n_generic(g, view, strategy.lam1, strategy.lam2).n_shares


@dataclass(frozen=True)
class SimConfig:
    """One simulation run: contract, views, path budget and draw scheme."""

    option: OptionSpec
    view: MarketView
    n_paths: int
    seed: int
    strategies: tuple[Strategy, ...]
    sigma_mode: str = "deterministic"
    n_substeps: int = 1


def _validate_config(config: SimConfig) -> None:
    if not (isinstance(config.n_paths, int) and config.n_paths >= 1):
        raise DomainError(f"n_paths must be an integer >= 1, got {config.n_paths!r}")
    if not (isinstance(config.seed, int) and 0 <= config.seed < 2 ** 64):
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {config.seed!r}")
    if not config.strategies:
        raise DomainError("strategies must be nonempty")
    if config.sigma_mode not in SIGMA_MODES:
        raise DomainError(f"sigma_mode must be one of {SIGMA_MODES}, got {config.sigma_mode!r}")
    if not (isinstance(config.n_substeps, int) and config.n_substeps >= 1):
        raise DomainError(f"n_substeps must be an integer >= 1, got {config.n_substeps!r}")
    if not config.view.dt < config.option.maturity:
        raise DomainError(
            f"view.dt ({config.view.dt!r}) must be below the option maturity "
            f"({config.option.maturity!r})"
        )
    violation = validate(config.view.vol_process)
    if violation is not None:
        raise DomainError(f"vol_process.{violation.field}: {violation.message}")
    if config.option.vol_hat != config.view.vol_process.sigma0:
        raise DomainError(
            f"option.vol_hat ({config.option.vol_hat!r}) must equal the vol process "
            f"sigma0 ({config.view.vol_process.sigma0!r}); the model prices and "
            f"hedges at the vol the process starts from"
        )


def gbm_terminal(s0: float, mu: float, vol: float, dt: float, z1):
    """Exact lognormal step of the underlying; z1 may be an array."""
    if not s0 > 0.0:
        raise DomainError(f"s0 must be > 0, got {s0!r}")
    if not vol >= 0.0:
        raise DomainError(f"vol must be >= 0, got {vol!r}")
    if not dt >= 0.0:
        raise DomainError(f"dt must be >= 0, got {dt!r}")
    return s0 * np.exp((mu - 0.5 * vol * vol) * dt + vol * math.sqrt(dt) * z1)


def hedging_error(option: OptionSpec, rate: float, dt: float, n_shares: float,
                  s1, sigma1):
    """P&L of the hedged position over the interval net of financing.

    Long one call, short n_shares of stock, no rebalancing; s1/sigma1 may be
    arrays for batch evaluation.
    """
    if not dt >= 0.0:
        raise DomainError(f"dt must be >= 0, got {dt!r}")
    if option.maturity - dt <= 0.0:
        raise MaturityExhaustedError(
            f"dt ({dt!r}) consumes the option's remaining life ({option.maturity!r})"
        )
    if not np.all(np.asarray(sigma1) > 0.0):
        raise DomainError("sigma1 must be > 0")
    v0 = call_price(option.spot, option.strike, rate, option.vol_hat, option.maturity)
    v1 = call_price(s1, option.strike, rate, sigma1, option.maturity - dt)
    pi0 = v0 - n_shares * option.spot
    pi1 = v1 - n_shares * s1
    return pi1 - pi0 - pi0 * rate * dt


def _drift_arr(proc: VolProcessSpec, sig):
    if isinstance(proc, LinearDrift):
        return proc.mu_sigma
    return proc.kappa * (proc.theta_bar - sig)


def _diffusion_arr(proc: VolProcessSpec, sig):
    if isinstance(proc, LinearDrift):
        return 0.0
    if isinstance(proc, OrnsteinUhlenbeck):
        return proc.alpha
    return proc.alpha * np.sqrt(sig)


def _terminal_sigma(config: SimConfig, start: int, count: int):
    """Vol at the interval end: scalar in deterministic mode, array otherwise."""
    proc = config.view.vol_process
    dt = config.view.dt
    if config.sigma_mode == "deterministic":
        f0, _ = start_coefficients(proc)
        return proc.sigma0 + f0 * dt
    h = dt / config.n_substeps
    sqh = math.sqrt(h)
    sig = np.full(count, proc.sigma0)
    for j in range(config.n_substeps):
        z = normal_draws(config.seed, _VOL_SUBSTREAM_BASE + j, start, count)
        sig = np.maximum(sig + _drift_arr(proc, sig) * h + _diffusion_arr(proc, sig) * sqh * z,
                         VOL_FLOOR)
    return sig


def path_diagnostics(config: SimConfig, start: int, count: int) -> dict:
    """Per-path arrays for a contiguous index range (inspection/testing).

    Returns z1, s1, sigma1, the shared P&L pieces a and b (the per-path error
    of a strategy with share count n is a - n*b), share counts, and the dh
    matrix with one row per strategy.
    """
    opt, view = config.option, config.view
    z1 = normal_draws(config.seed, _Z1_SUBSTREAM, start, count)
    s1 = opt.spot * np.exp((view.mu - 0.5 * opt.vol_hat ** 2) * view.dt
                           + opt.vol_hat * math.sqrt(view.dt) * z1)
    sigma1 = _terminal_sigma(config, start, count)
    v0 = float(call_price(opt.spot, opt.strike, opt.rate, opt.vol_hat, opt.maturity))
    v1 = call_price(s1, opt.strike, opt.rate, sigma1, opt.maturity - view.dt)
    a = v1 - v0 - v0 * opt.rate * view.dt
    b = s1 - opt.spot - opt.rate * opt.spot * view.dt
    shares = [share_count(s, opt, view) for s in config.strategies]
    dh = np.vstack([a - n * b for n in shares]) if shares else np.empty((0, count))
    return {
        "z1": z1,
        "s1": s1,
        "sigma1": np.broadcast_to(np.asarray(sigma1, dtype=float), z1.shape),
        "a": a,
        "b": b,
        "shares": shares,
        "labels": [s.label for s in config.strategies],
        "dh": dh,
    }


def _chunk_partials(config: SimConfig, shares: list[float], v0: float,
                    start: int, count: int):
    """Per-chunk reduction: exact content depends only on (config, chunk)."""
    opt, view = config.option, config.view
    z1 = normal_draws(config.seed, _Z1_SUBSTREAM, start, count)
    s1 = opt.spot * np.exp((view.mu - 0.5 * opt.vol_hat ** 2) * view.dt
                           + opt.vol_hat * math.sqrt(view.dt) * z1)
    sigma1 = _terminal_sigma(config, start, count)
    v1 = call_price(s1, opt.strike, opt.rate, sigma1, opt.maturity - view.dt)
    a = v1 - v0 - v0 * opt.rate * view.dt
    b = s1 - opt.spot - opt.rate * opt.spot * view.dt

    abs_dh = []
    sums = []
    for n in shares:
        dh = a - n * b
        ad = np.abs(dh)
        sq = dh * dh
        sums.append((float(np.sum(ad)), float(np.sum(sq)),
                     float(np.sum(sq * sq)), float(np.sum(dh))))
        abs_dh.append(ad)
    pair_sums = []
    for i in range(len(shares)):
        for j in range(i + 1, len(shares)):
            d = abs_dh[i] - abs_dh[j]
            pair_sums.append((float(np.sum(d)), float(np.sum(d * d))))
    return sums, pair_sums


@dataclass(frozen=True)
class StrategyStats:
    """MC estimates for one strategy; stderr fields are NaN for n_paths == 1."""

    strategy: str
    mahe: float
    mahe_stderr: float
    mshe: float
    mshe_stderr: float
    mean_dh: float


@dataclass(frozen=True)
class PairedDiff:
    """Paired MAHE difference (a minus b) with its paired standard error."""

    strategy_a: str
    strategy_b: str
    mahe_diff: float
    mahe_diff_stderr: float


@dataclass(frozen=True)
class SimResult:
    stats: tuple[StrategyStats, ...]
    paired: tuple[PairedDiff, ...]
    config: SimConfig
    wall_time: float

    def stats_for(self, label: str) -> StrategyStats:
        for s in self.stats:
            if s.strategy == label:
                return s
        raise KeyError(label)

    def paired_for(self, label_a: str, label_b: str) -> PairedDiff:
        for p in self.paired:
            if (p.strategy_a, p.strategy_b) == (label_a, label_b):
                return p
            if (p.strategy_a, p.strategy_b) == (label_b, label_a):
                return PairedDiff(label_a, label_b, -p.mahe_diff, p.mahe_diff_stderr)
        raise KeyError((label_a, label_b))


def _mean_and_stderr(total: float, total_sq: float, n: int) -> tuple[float, float]:
    mean = total / n
    if n < 2:
        return mean, math.nan
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    return mean, math.sqrt(var / n)


def estimate_errors(config: SimConfig, n_workers: int = 1) -> SimResult:
    """Estimate MAHE/MSHE per strategy on common paths.

    Paths are processed in fixed-size chunks; within a chunk sums use numpy's
    pairwise reduction on identical arrays, across chunks math.fsum in chunk
    order, so the result is bit-identical for any n_workers.
    """
    t0 = time.perf_counter()
    _validate_config(config)
    if not (isinstance(n_workers, int) and n_workers >= 1):
        raise DomainError(f"n_workers must be an integer >= 1, got {n_workers!r}")
    opt, view = config.option, config.view
    shares = [share_count(s, opt, view) for s in config.strategies]
    v0 = float(call_price(opt.spot, opt.strike, opt.rate, opt.vol_hat, opt.maturity))

    n = config.n_paths
    ranges = [(s, min(CHUNK_PATHS, n - s)) for s in range(0, n, CHUNK_PATHS)]
    work = lambda rng: _chunk_partials(config, shares, v0, rng[0], rng[1])
    if n_workers == 1 or len(ranges) == 1:
        parts = [work(rng) for rng in ranges]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(work, ranges))

    stats = []
    for k, strat in enumerate(config.strategies):
        tot_abs = math.fsum(p[0][k][0] for p in parts)
        tot_sq = math.fsum(p[0][k][1] for p in parts)
        tot_quad = math.fsum(p[0][k][2] for p in parts)
        tot_dh = math.fsum(p[0][k][3] for p in parts)
        mahe, mahe_se = _mean_and_stderr(tot_abs, tot_sq, n)
        mshe, mshe_se = _mean_and_stderr(tot_sq, tot_quad, n)
        stats.append(StrategyStats(strat.label, mahe, mahe_se, mshe, mshe_se, tot_dh / n))

    paired = []
    idx = 0
    for i in range(len(config.strategies)):
        for j in range(i + 1, len(config.strategies)):
            tot_d = math.fsum(p[1][idx][0] for p in parts)
            tot_d2 = math.fsum(p[1][idx][1] for p in parts)
            diff, diff_se = _mean_and_stderr(tot_d, tot_d2, n)
            paired.append(PairedDiff(config.strategies[i].label,
                                     config.strategies[j].label, diff, diff_se))
            idx += 1

    return SimResult(tuple(stats), tuple(paired), config, time.perf_counter() - t0)


SWEEP_STRATEGIES = (Strategy("BSM"), Strategy("Mastinsek"), Strategy("Star"))


@dataclass(frozen=True)
class SweepCell:
    mu: float
    mu_sigma: float
    mahe_bsm: float
    mahe_mastinsek: float
    mahe_star: float
    diff_bsm_star: float
    diff_bsm_star_stderr: float
    diff_mastinsek_star: float
    diff_mastinsek_star_stderr: float


@dataclass(frozen=True)
class SweepResult:
    """Cells in row-major order: mu outer, mu_sigma inner."""

    mu_grid: tuple[float, ...]
    mu_sigma_grid: tuple[float, ...]
    cells: tuple[SweepCell, ...]
    config: SimConfig
    wall_time: float

    def cell(self, i_mu: int, i_mu_sigma: int) -> SweepCell:
        return self.cells[i_mu * len(self.mu_sigma_grid) + i_mu_sigma]


def sweep(base: SimConfig, mu_grid, mu_sigma_grid, n_workers: int = 1) -> SweepResult:
    """MAHE difference matrices over a grid of (mu, mu_sigma) views.

    Every cell re-runs the simulation with the same seed, so cells share the
    underlying shocks; each cell's vol view is a linear drift mu_sigma with
    the end-of-interval vol set to sigma0 + mu_sigma*dt. Strategies compared:
    BSM and Mastinsek, each against Star.
    """
    t0 = time.perf_counter()
    mu_grid = tuple(float(x) for x in mu_grid)
    mu_sigma_grid = tuple(float(x) for x in mu_sigma_grid)
    if not mu_grid or not mu_sigma_grid:
        raise DomainError("sweep grids must be nonempty")
    for name, grid in (("mu_grid", mu_grid), ("mu_sigma_grid", mu_sigma_grid)):
        if not all(math.isfinite(x) for x in grid):
            raise DomainError(f"{name} must contain finite values")
    if not isinstance(base.view.vol_process, LinearDrift):
        raise DomainError(
            f"sweep varies the vol drift directly and needs a LinearDrift vol "
            f"process; got {base.view.vol_process.kind}"
        )

    cells = []
    for mu in mu_grid:
        for ms in mu_sigma_grid:
            view = MarketView(mu=mu, dt=base.view.dt,
                              vol_process=LinearDrift(mu_sigma=ms, sigma0=base.option.vol_hat))
            cfg = replace(base, view=view, strategies=SWEEP_STRATEGIES)
            res = estimate_errors(cfg, n_workers=n_workers)
            bs = res.paired_for("BSM", "Star")
            ms_star = res.paired_for("Mastinsek", "Star")
            cells.append(SweepCell(
                mu=mu,
                mu_sigma=ms,
                mahe_bsm=res.stats_for("BSM").mahe,
                mahe_mastinsek=res.stats_for("Mastinsek").mahe,
                mahe_star=res.stats_for("Star").mahe,
                diff_bsm_star=bs.mahe_diff,
                diff_bsm_star_stderr=bs.mahe_diff_stderr,
                diff_mastinsek_star=ms_star.mahe_diff,
                diff_mastinsek_star_stderr=ms_star.mahe_diff_stderr,
            ))
    return SweepResult(mu_grid, mu_sigma_grid, tuple(cells), base,
                       time.perf_counter() - t0)
