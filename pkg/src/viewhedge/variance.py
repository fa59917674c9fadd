"""Analytic moments of the one-interval hedging error.

The hedging error of the generic strategy collapses (to O(dt^(3/2)), with the
vol drift/diffusion frozen at the interval start) to a polynomial in the two
independent shocks:

    dH = gamma*(Z1^2 - 1) + theta*Z1 + psi*Z1^3 + omega*Z2 + tau*Z1*Z2
         + iota*Z2^2 + chi*Z1^2*Z2 + xi*Z1*Z2^2 + eps*Z2^3 + mean_term

Everything here is exact arithmetic on that representation: the coefficient
ledger, Var(dH) and MSHE as closed forms in (lam1, lam2), and the affine line
of (lam1, lam2) minimizers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateDenominatorError, DomainError
from .greeks import GreeksBundle
from .hedge import MarketView
from .vol_models import start_coefficients


@dataclass(frozen=True)
class ErrorCoefficients:
    """Coefficients of the collapsed hedging-error polynomial.

    gamma, beta, delta enter through the gamma*(Z1^2 - 1 + beta*Z1 + delta*Z1^3)
    group; phi and eta carry the lam1/lam2 dependence; the rest are pure vol
    terms. mean_term is the deterministic vega * f0 * dt summand. literal_omega
    records which reconstruction of omega's dangling summand was used.
    """

    gamma: float
    beta: float
    delta: float
    phi: float
    eta: float
    eps: float
    xi: float
    omega: float
    tau: float
    iota: float
    chi: float
    mean_term: float
    literal_omega: bool = False


def coefficients(g: GreeksBundle, view: MarketView, spot: float, rate: float,
                 literal_omega: bool = False) -> ErrorCoefficients:
    """Build the coefficient set from one greeks evaluation.

    The hedged vol and the vol process's starting value are the same number in
    this model, so sigma-hat is read off view.vol_process.sigma0.

    omega's fourth summand: the default is 0.5 * v_sigt * g0 * dt^(3/2), the
    value the term-collection actually produces; literal_omega=True drops the
    0.5 * v_sigt factor (a published variant kept for comparison).
    """
    f0, g0 = start_coefficients(view.vol_process)
    sig = view.vol_process.sigma0
    dt = view.dt
    S = spot
    sqdt = math.sqrt(dt)
    dt32 = dt * sqdt

    omega_tail = g0 * dt32 if literal_omega else 0.5 * g.v_sigt * g0 * dt32
    omega = (g.v_sig * g0 * sqdt
             + g.v_sigsig * f0 * g0 * dt32
             + g.v_ssig * S * g0 * (view.mu - 0.5 * sig * sig) * dt32
             + omega_tail)

    return ErrorCoefficients(
        gamma=0.5 * g.v_ss * sig * sig * S * S * dt,
        beta=2.0 * (view.mu - 0.5 * sig * sig) * sqdt / sig,
        delta=(sig * sig - 2.0 * rate) * sqdt / (3.0 * sig),
        phi=g.v_st * sig * S * dt32,
        eta=g.v_ssig * sig * S * f0 * dt32,
        eps=g.v_sigsigsig * g0 ** 3 * dt32 / 6.0,
        xi=0.5 * g.v_ssigsig * g0 * g0 * S * sig * dt32,
        omega=omega,
        tau=g.v_ssig * g0 * S * sig * dt,
        iota=0.5 * g.v_sigsig * g0 * g0 * dt,
        chi=0.5 * g.v_sssig * S * S * sig * sig * g0 * dt32
            + 0.5 * g.v_ssig * S * sig * sig * g0 * dt32,
        mean_term=g.v_sig * f0 * dt,
        literal_omega=literal_omega,
    )


def theta_psi(c: ErrorCoefficients, lam1: float, lam2: float) -> tuple[float, float]:
    """The Z1 and Z1^3 coefficients for a given (lam1, lam2)."""
    theta = c.gamma * c.beta + (1.0 - lam1) * c.phi + (1.0 - lam2) * c.eta
    psi = c.gamma * c.delta - c.phi / 3.0
    return theta, psi


def gaussian_even_moment(n: int) -> float:
    """E[Z^(2n)] = (2n-1)!! for standard normal Z."""
    if not (isinstance(n, int) and n >= 1):
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    out = 1.0
    for i in range(1, n + 1):
        out *= 2 * i - 1
        if math.isinf(out):
            raise OverflowError(f"E[Z^{2 * n}] exceeds float range")
    return out


def gaussian_moment(k: int) -> float:
    """E[Z^k]: 0 for odd k, (k-1)!! for even k."""
    if not (isinstance(k, int) and k >= 0):
        raise DomainError(f"k must be an integer >= 0, got {k!r}")
    if k % 2 == 1:
        return 0.0
    if k == 0:
        return 1.0
    return gaussian_even_moment(k // 2)


def var_delta_h(c: ErrorCoefficients, lam1: float, lam2: float) -> float:
    """Variance of the hedging error at the given (lam1, lam2)."""
    theta, psi = theta_psi(c, lam1, lam2)
    return math.fsum((
        theta * theta,
        15.0 * psi * psi,
        6.0 * theta * psi,
        2.0 * c.gamma * c.gamma,
        2.0 * c.xi * theta,
        2.0 * c.iota * c.iota,
        3.0 * c.xi * c.xi,
        6.0 * c.xi * psi,
        3.0 * c.chi * c.chi,
        2.0 * c.chi * c.omega,
        c.omega * c.omega,
        c.tau * c.tau,
        15.0 * c.eps * c.eps,
        6.0 * c.eps * c.chi,
        6.0 * c.eps * c.omega,
    ))


def mean_delta_h(c: ErrorCoefficients) -> float:
    """E[dH]; only the Z2^2 term and the deterministic summand survive."""
    return c.iota + c.mean_term


def mshe(c: ErrorCoefficients, lam1: float, lam2: float) -> float:
    """Mean squared hedging error: variance plus squared mean."""
    m = mean_delta_h(c)
    return var_delta_h(c, lam1, lam2) + m * m


def sample_delta_h(c: ErrorCoefficients, lam1: float, lam2: float, z1, z2):
    """Evaluate the error polynomial on shock samples (array-capable).

    This is the brute-force route the analytic moments are tested against.
    """
    theta, psi = theta_psi(c, lam1, lam2)
    return (c.gamma * (z1 * z1 - 1.0) + theta * z1 + psi * z1 ** 3
            + c.omega * z2 + c.tau * z1 * z2 + c.iota * z2 * z2
            + c.chi * z1 * z1 * z2 + c.xi * z1 * z2 * z2 + c.eps * z2 ** 3
            + c.mean_term)


@dataclass(frozen=True)
class MinimizerLine:
    """The affine family lam2 = intercept + slope * lam1 minimizing Var(dH).

    min_value is the (common) variance attained anywhere on the line.
    """

    intercept: float
    slope: float
    min_value: float

    def lambda2_at(self, lam1: float) -> float:
        return self.intercept + self.slope * lam1


def minimize_f(c: ErrorCoefficients) -> MinimizerLine:
    """Closed-form minimizer of Var(dH) over (lam1, lam2).

    The variance is a rank-one quadratic in (lam1, lam2): it depends on them
    only through theta, so the minimizing set is the whole line where theta
    hits its optimum. Needs eta != 0, otherwise lam2 does not act.
    """
    num = c.gamma * c.beta + c.phi + 3.0 * (c.gamma * c.delta - c.phi / 3.0) + c.xi
    if abs(c.eta) < 1e-14 * max(1.0, abs(num)):
        raise DegenerateDenominatorError(
            f"minimizer line is undefined: eta {c.eta!r} vanishes"
        )
    intercept = 1.0 + num / c.eta
    slope = -c.phi / c.eta
    return MinimizerLine(intercept, slope, var_delta_h(c, 0.0, intercept))
