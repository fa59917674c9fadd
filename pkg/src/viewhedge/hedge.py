"""Share counts for hedging a long call over a known holding interval.

Strategies, from least to most view-aware:
  n_bsm        plain delta
  n_mastinsek  delta + gamma correction for the drift view (mu - r)
  n_generic    delta + lam1 * charm-decay term + lam2 * vanna * expected vol move
  n_star       the variance-minimizing count: delta + drift, vol-drift and
               vol-convexity corrections, all O(dt)

lambda2_star / lambda_star are the coefficients that make n_generic coincide
with n_star; they exist whenever the vol-drift direction is identified.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateDenominatorError, DomainError
from .greeks import GreeksBundle
from .vol_models import VolProcessSpec, expected_delta_sigma, start_coefficients


@dataclass(frozen=True)
class MarketView:
    """Directional inputs the trader commits to for the holding interval.

    mu is the annualized growth-rate view on the underlying; dt is the known
    holding horizon; vol_process describes where implied vol is headed.
    """

    mu: float
    dt: float
    vol_process: VolProcessSpec

    def __post_init__(self) -> None:
        if not (isinstance(self.mu, (int, float)) and math.isfinite(self.mu)):
            raise DomainError(f"mu must be finite, got {self.mu!r}")
        if not (isinstance(self.dt, (int, float)) and math.isfinite(self.dt) and self.dt >= 0.0):
            raise DomainError(f"dt must be >= 0, got {self.dt!r}")


@dataclass(frozen=True)
class HedgeRatio:
    """Share count with its additive decomposition.

    n_shares is constructed as the exact sum of the five terms; terms that a
    strategy does not use are zero.
    """

    n_shares: float
    base: float
    drift_term: float
    time_decay_term: float
    vol_drift_term: float
    vol_convexity_term: float


def _ratio(base: float, drift: float = 0.0, time_decay: float = 0.0,
           vol_drift: float = 0.0, vol_convexity: float = 0.0) -> HedgeRatio:
    total = math.fsum((base, drift, time_decay, vol_drift, vol_convexity))
    return HedgeRatio(total, base, drift, time_decay, vol_drift, vol_convexity)


def n_bsm(g: GreeksBundle) -> HedgeRatio:
    """Plain delta hedge."""
    return _ratio(g.v_s)


def n_mastinsek(g: GreeksBundle, view: MarketView, spot: float, rate: float) -> HedgeRatio:
    """Delta plus the drift-view gamma correction (mu - r) * S * gamma * dt."""
    return _ratio(g.v_s, drift=(view.mu - rate) * spot * g.v_ss * view.dt)


def n_generic(g: GreeksBundle, view: MarketView, lam1: float, lam2: float) -> HedgeRatio:
    """Two-parameter family: delta + lam1 charm-decay + lam2 vanna vol-move."""
    e_dsig = expected_delta_sigma(view.vol_process, view.dt)
    return _ratio(
        g.v_s,
        time_decay=lam1 * g.v_st * view.dt,
        vol_drift=lam2 * g.v_ssig * e_dsig,
    )


def _guarded_quotient(num: float, den: float, what: str) -> float:
    if abs(den) < 1e-14 * max(1.0, abs(num)):
        raise DegenerateDenominatorError(
            f"{what} is undefined: denominator {den!r} vanishes (numerator {num!r})"
        )
    return num / den


def lambda2_star(g: GreeksBundle, view: MarketView, spot: float, rate: float,
                 lam1: float) -> float:
    """The lam2 that makes n_generic(lam1, .) variance-minimizing.

    Requires a nonzero vanna * vol-drift product; otherwise the lam2 direction
    does not move the hedge and the quotient is reported as degenerate.
    """
    f0, g0 = start_coefficients(view.vol_process)
    num = (g.v_ssig * f0 + 0.5 * g.v_ssigsig * g0 * g0
           + g.v_ss * (view.mu - rate) * spot - lam1 * g.v_st)
    return _guarded_quotient(num, g.v_ssig * f0, "lambda2_star")


def lambda_star(g: GreeksBundle, view: MarketView, spot: float, rate: float) -> float:
    """The single lambda with n_generic(lambda, lambda) variance-minimizing."""
    f0, g0 = start_coefficients(view.vol_process)
    num = (g.v_ssig * f0 + 0.5 * g.v_ssigsig * g0 * g0
           + g.v_ss * (view.mu - rate) * spot)
    return _guarded_quotient(num, g.v_ssig * f0 + g.v_st, "lambda_star")


def n_star(g: GreeksBundle, view: MarketView, spot: float, rate: float) -> HedgeRatio:
    """The view-adjusted count; always defined, no quotient involved.

    Coincides with n_generic at (lam1, lambda2_star(lam1)) for every lam1 and
    with n_generic(lambda_star, lambda_star) whenever those are defined.
    """
    f0, g0 = start_coefficients(view.vol_process)
    dt = view.dt
    # drift term spelled exactly as in n_mastinsek so the two coincide
    # bitwise when f0 = g0 = 0
    return _ratio(
        g.v_s,
        drift=(view.mu - rate) * spot * g.v_ss * dt,
        vol_drift=g.v_ssig * f0 * dt,
        vol_convexity=0.5 * g.v_ssigsig * g0 * g0 * dt,
    )
