"""Black-Scholes-Merton call pricing and Greeks through third order.

Conventions used throughout:
  - time derivatives (v_t, v_st, v_sigt) are with respect to calendar time,
    i.e. -d/dT where T is time remaining to expiry;
  - vol derivatives are taken at the quoted vol itself (one vol argument);
  - only European calls, no dividends.

All functions are pure; `call_price` additionally accepts numpy arrays and
broadcasts, which is what the simulation engine uses for path revaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.special import ndtr

from .errors import DomainError

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def norm_cdf(x):
    """Standard normal CDF, erf-based (absolute error below 1e-15)."""
    return ndtr(x)


def norm_pdf(x):
    """Standard normal density."""
    return np.exp(-0.5 * np.square(x)) / _SQRT_2PI


@dataclass(frozen=True)
class OptionSpec:
    """European call state at the evaluation instant.

    maturity is the time remaining to expiry (years); vol_hat is the vol the
    contract is priced and hedged at.
    """

    spot: float
    strike: float
    rate: float
    vol_hat: float
    maturity: float

    def __post_init__(self) -> None:
        for name in ("spot", "strike", "vol_hat", "maturity"):
            v = getattr(self, name)
            # NaN fails the > 0 comparison, so it is caught here too
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0.0):
                raise DomainError(f"{name} must be a positive finite number, got {v!r}")
        if not (isinstance(self.rate, (int, float)) and math.isfinite(self.rate)):
            raise DomainError(f"rate must be finite, got {self.rate!r}")


@dataclass(frozen=True)
class GreeksBundle:
    """Call value and its twelve partial derivatives at one point.

    Field naming: s = spot, sig = vol, t = calendar time; repeated letters are
    repeated differentiation (v_ssig is d2V/dS dsig, v_ssigsig is d3V/dS dsig2).
    """

    price: float
    v_s: float
    v_ss: float
    v_sss: float
    v_sig: float
    v_sigsig: float
    v_sigsigsig: float
    v_t: float
    v_st: float
    v_sigt: float
    v_ssig: float
    v_sssig: float
    v_ssigsig: float


GREEK_NAMES = (
    "v_s", "v_ss", "v_sss",
    "v_sig", "v_sigsig", "v_sigsigsig",
    "v_t", "v_st", "v_sigt",
    "v_ssig", "v_sssig", "v_ssigsig",
)


def d_terms(spec: OptionSpec) -> tuple[float, float]:
    """The two standardized log-moneyness terms of the call formula."""
    sq = math.sqrt(spec.maturity)
    d1 = (math.log(spec.spot / spec.strike)
          + (spec.rate + 0.5 * spec.vol_hat ** 2) * spec.maturity) / (spec.vol_hat * sq)
    return d1, d1 - spec.vol_hat * sq


def call_price(spot, strike, rate, vol, maturity):
    """Call value; scalar or numpy array arguments (broadcasting).

    No argument validation: this is the hot path used on simulated states.
    """
    sq = np.sqrt(maturity)
    d1 = (np.log(spot / strike) + (rate + 0.5 * vol * vol) * maturity) / (vol * sq)
    d2 = d1 - vol * sq
    return spot * ndtr(d1) - strike * np.exp(-rate * maturity) * ndtr(d2)


def price(spec: OptionSpec) -> float:
    """Call value for a validated contract."""
    d1, d2 = d_terms(spec)
    disc = math.exp(-spec.rate * spec.maturity)
    return spec.spot * float(ndtr(d1)) - spec.strike * disc * float(ndtr(d2))


def greeks(spec: OptionSpec) -> GreeksBundle:
    """All closed-form derivatives needed by the hedge and variance formulas."""
    S, K, r = spec.spot, spec.strike, spec.rate
    sig, T = spec.vol_hat, spec.maturity
    sq = math.sqrt(T)
    d1, d2 = d_terms(spec)
    pdf1 = math.exp(-0.5 * d1 * d1) / _SQRT_2PI
    cdf1 = float(ndtr(d1))
    cdf2 = float(ndtr(d2))
    disc = math.exp(-r * T)

    v_ss = pdf1 / (S * sig * sq)
    v_sig = S * pdf1 * sq
    return GreeksBundle(
        price=S * cdf1 - K * disc * cdf2,
        v_s=cdf1,
        v_ss=v_ss,
        v_sss=-v_ss / S * (1.0 + d1 / (sig * sq)),
        v_sig=v_sig,
        v_sigsig=v_sig * d1 * d2 / sig,
        v_sigsigsig=v_sig / sig ** 2 * (d1 * d1 * d2 * d2 - d1 * d1 - d2 * d2 - d1 * d2),
        v_t=-(S * pdf1 * sig / (2.0 * sq) + r * K * disc * cdf2),
        v_st=-pdf1 * (2.0 * r * T - d2 * sig * sq) / (2.0 * T * sig * sq),
        v_sigt=S * pdf1 * (r * d1 / sig - (1.0 + d1 * d2) / (2.0 * sq)),
        v_ssig=-pdf1 * d2 / sig,
        v_sssig=v_ss * (d1 * d2 - 1.0) / sig,
        v_ssigsig=pdf1 / sig ** 2 * (d1 + d2 - d1 * d2 * d2),
    )


# central stencils, 4th-order accurate; offsets paired with weights
_W1 = ((-2, -1, 1, 2), (1 / 12, -8 / 12, 8 / 12, -1 / 12))
_W2 = ((-2, -1, 0, 1, 2), (-1 / 12, 16 / 12, -30 / 12, 16 / 12, -1 / 12))
_W3 = ((-3, -2, -1, 1, 2, 3), (1 / 8, -1.0, 13 / 8, -13 / 8, 1.0, -1 / 8))
_STENCILS = {1: _W1, 2: _W2, 3: _W3}

# per-greek differentiation orders along (spot, vol, maturity); negate=True
# converts the d/dT result to the calendar-time convention
_FD_LAYOUT = {
    "v_s": ((1, 0, 0), False),
    "v_ss": ((2, 0, 0), False),
    "v_sss": ((3, 0, 0), False),
    "v_sig": ((0, 1, 0), False),
    "v_sigsig": ((0, 2, 0), False),
    "v_sigsigsig": ((0, 3, 0), False),
    "v_t": ((0, 0, 1), True),
    "v_st": ((1, 0, 1), True),
    "v_sigt": ((0, 1, 1), True),
    "v_ssig": ((1, 1, 0), False),
    "v_sssig": ((2, 1, 0), False),
    "v_ssigsig": ((1, 2, 0), False),
}


def _fd_floor_scales(spec: OptionSpec) -> dict[str, float]:
    # Natural magnitude of each greek so the error metric stays meaningful
    # where the greek itself crosses zero (v_st, v_ssig, ... all change sign
    # inside the supported parameter region).
    S, r, sig, T = spec.spot, spec.rate, spec.vol_hat, spec.maturity
    sq = math.sqrt(T)
    m = sig * sq
    return {
        "v_s": 1.0,
        "v_ss": 1.0 / (S * m),
        "v_sss": (1.0 + 1.0 / m) / (S * S * m),
        "v_sig": S * sq,
        "v_sigsig": S * sq / sig,
        "v_sigsigsig": S * sq / sig ** 2,
        "v_t": S * (sig / (2.0 * sq) + abs(r)),
        "v_st": abs(r) / m + 1.0 / (2.0 * T),
        "v_sigt": S * (abs(r) / sig + 1.0 / sq),
        "v_ssig": 1.0 / sig,
        "v_sssig": 1.0 / (S * m * sig),
        "v_ssigsig": 1.0 / sig ** 2,
    }


def fd_validate(spec: OptionSpec, rel_step: float) -> dict[str, float]:
    """Compare every closed-form greek against central finite differences.

    Returns {greek name: error}, where error is |analytic - fd| relative to
    max(|analytic|, |fd|, small per-greek floor). Pure and deterministic.
    """
    if not 1e-8 <= rel_step <= 1e-2:
        raise DomainError(f"rel_step must be within [1e-8, 1e-2], got {rel_step!r}")

    S, K, r, sig, T = spec.spot, spec.strike, spec.rate, spec.vol_hat, spec.maturity
    base_scale = (S * min(sig * math.sqrt(T), 1.0), sig, T)
    g = greeks(spec)
    floors = _fd_floor_scales(spec)

    report: dict[str, float] = {}
    for name, (orders, negate) in _FD_LAYOUT.items():
        total = sum(orders)
        step_frac = rel_step ** (1.0 / total)
        if total == 3:
            step_frac *= 0.5  # truncation error dominates third order otherwise
        steps = [sc * step_frac for sc in base_scale]
        steps[2] = min(steps[2], T / 4.0)  # keep maturity bumps on-domain

        axes = [i for i, o in enumerate(orders) if o > 0]
        stencils = [_STENCILS[orders[i]] for i in axes]
        terms = []
        for combo in product(*[zip(*st) for st in stencils]):
            bump = [0.0, 0.0, 0.0]
            w = 1.0
            for ax, (offset, weight) in zip(axes, combo):
                bump[ax] = offset * steps[ax]
                w *= weight
            terms.append(w * call_price(S + bump[0], K, r, sig + bump[1], T + bump[2]))
        denom = math.prod(steps[i] ** orders[i] for i in axes)
        fd = math.fsum(terms) / denom
        if negate:
            fd = -fd

        a = getattr(g, name)
        report[name] = abs(a - fd) / max(abs(a), abs(fd), 0.01 * floors[name])
    return report
