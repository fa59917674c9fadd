"""Implied-vol process models: d(sigma) = f(sigma) dt + g(sigma) dW.

Three kinds: a pure linear drift (deterministic), mean-reverting with constant
noise (OrnsteinUhlenbeck), and mean-reverting with square-root noise (CIR).
Each spec carries its own starting vol sigma0; f0/g0 in the hedge and variance
formulas are these functions evaluated at sigma0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError

VOL_FLOOR = 1e-8


@dataclass(frozen=True)
class LinearDrift:
    """sigma drifts at constant rate mu_sigma; no noise."""

    mu_sigma: float
    sigma0: float

    kind = "LinearDrift"


@dataclass(frozen=True)
class OrnsteinUhlenbeck:
    """Mean reversion at rate kappa towards theta_bar, constant noise alpha."""

    kappa: float
    theta_bar: float
    alpha: float
    sigma0: float

    kind = "OrnsteinUhlenbeck"


@dataclass(frozen=True)
class CIR:
    """Mean reversion with sqrt-of-level noise; needs 2*kappa*theta_bar > alpha^2."""

    kappa: float
    theta_bar: float
    alpha: float
    sigma0: float

    kind = "CIR"


VolProcessSpec = Union[LinearDrift, OrnsteinUhlenbeck, CIR]


@dataclass(frozen=True)
class Violation:
    """A failed parameter constraint; message states the failed inequality."""

    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message}"


def _check_sigma(sigma: float) -> None:
    if not sigma > 0.0:
        raise DomainError(f"sigma must be > 0, got {sigma!r}")


def drift_at(proc: VolProcessSpec, sigma: float) -> float:
    """f(sigma) for the given process."""
    _check_sigma(sigma)
    if isinstance(proc, LinearDrift):
        return proc.mu_sigma
    return proc.kappa * (proc.theta_bar - sigma)


def diffusion_at(proc: VolProcessSpec, sigma: float) -> float:
    """g(sigma) for the given process."""
    _check_sigma(sigma)
    if isinstance(proc, LinearDrift):
        return 0.0
    if isinstance(proc, OrnsteinUhlenbeck):
        return proc.alpha
    return proc.alpha * math.sqrt(sigma)


def start_coefficients(proc: VolProcessSpec) -> tuple[float, float]:
    """(f0, g0): drift and diffusion frozen at the starting vol."""
    return drift_at(proc, proc.sigma0), diffusion_at(proc, proc.sigma0)


def expected_delta_sigma(proc: VolProcessSpec, dt: float, exact: bool = False) -> float:
    """E[sigma(t0+dt) - sigma(t0)].

    Default is the first-order value f0*dt used by every hedge/variance
    formula; exact=True returns the closed-form mean for the mean-reverting
    models (and the same f0*dt for LinearDrift, where it is already exact).
    """
    if dt < 0.0:
        raise DomainError(f"dt must be >= 0, got {dt!r}")
    if exact and not isinstance(proc, LinearDrift):
        return (proc.theta_bar - proc.sigma0) * -math.expm1(-proc.kappa * dt)
    return drift_at(proc, proc.sigma0) * dt


def step(proc: VolProcessSpec, sigma: float, dt: float, z: float) -> float:
    """One Euler step of length dt driven by the standard normal z.

    Floored at VOL_FLOOR so downstream revaluation stays defined.
    """
    if not dt > 0.0:
        raise DomainError(f"dt must be > 0, got {dt!r}")
    raw = sigma + drift_at(proc, sigma) * dt + diffusion_at(proc, sigma) * math.sqrt(dt) * z
    return max(raw, VOL_FLOOR)


def validate(proc: VolProcessSpec) -> Violation | None:
    """Check the parameter constraints; None means ok.

    Returns (rather than raises) so config-layer callers can attach key paths.
    """
    if not proc.sigma0 > 0.0:
        return Violation("sigma0", f"sigma0 > 0 required, got {proc.sigma0!r}")
    if isinstance(proc, LinearDrift):
        if not math.isfinite(proc.mu_sigma):
            return Violation("mu_sigma", f"mu_sigma must be finite, got {proc.mu_sigma!r}")
        return None
    if not proc.kappa > 0.0:
        return Violation("kappa", f"kappa > 0 required, got {proc.kappa!r}")
    if not proc.theta_bar > 0.0:
        return Violation("theta_bar", f"theta_bar > 0 required, got {proc.theta_bar!r}")
    if not proc.alpha >= 0.0:
        return Violation("alpha", f"alpha >= 0 required, got {proc.alpha!r}")
    if isinstance(proc, CIR):
        lhs = 2.0 * proc.kappa * proc.theta_bar
        rhs = proc.alpha * proc.alpha
        if not lhs > rhs:
            return Violation(
                "alpha",
                f"positivity condition 2*kappa*theta_bar > alpha^2 violated: {lhs:.6g} <= {rhs:.6g}",
            )
    return None
