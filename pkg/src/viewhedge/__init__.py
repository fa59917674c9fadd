"""View-adjusted option hedging: analytics and Monte Carlo harness.

Closed-form call greeks, hedge ratios that tilt delta for a drift view and
implied-vol dynamics over a known rebalancing horizon, the analytic variance
of the one-period hedging error, and a reproducible simulation harness for
comparing strategies.
"""
from .errors import (
    ConfigError,
    DegenerateDenominatorError,
    DomainError,
    MaturityExhaustedError,
    ViewHedgeError,
)
from .greeks import (
    GREEK_NAMES,
    GreeksBundle,
    OptionSpec,
    call_price,
    d_terms,
    fd_validate,
    greeks,
    norm_cdf,
    norm_pdf,
    price,
)
from .heatmap import render_heatmap
from .hedge import (
    HedgeRatio,
    MarketView,
    lambda2_star,
    lambda_star,
    n_bsm,
    n_generic,
    n_mastinsek,
    n_star,
)
from .mc import (
    PathDraw,
    SimConfig,
    SimResult,
    Strategy,
    StrategyStats,
    SweepResult,
    estimate_errors,
    gbm_terminal,
    hedging_error,
    normal_draws,
    path_draw,
    share_count,
    sweep,
)
from .variance import (
    ErrorCoefficients,
    MinimizerLine,
    coefficients,
    gaussian_moment,
    mean_delta_h,
    minimize_f,
    mshe,
    sample_delta_h,
    theta_psi,
    var_delta_h,
)
from .vol_models import (
    CIR,
    VOL_FLOOR,
    LinearDrift,
    OrnsteinUhlenbeck,
    Violation,
    diffusion_at,
    drift_at,
    expected_delta_sigma,
    start_coefficients,
    step,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "CIR",
    "ConfigError",
    "DegenerateDenominatorError",
    "DomainError",
    "ErrorCoefficients",
    "GREEK_NAMES",
    "GreeksBundle",
    "HedgeRatio",
    "LinearDrift",
    "MarketView",
    "MaturityExhaustedError",
    "MinimizerLine",
    "OptionSpec",
    "OrnsteinUhlenbeck",
    "PathDraw",
    "SimConfig",
    "SimResult",
    "Strategy",
    "StrategyStats",
    "SweepResult",
    "VOL_FLOOR",
    "ViewHedgeError",
    "Violation",
    "call_price",
    "coefficients",
    "d_terms",
    "diffusion_at",
    "drift_at",
    "estimate_errors",
    "expected_delta_sigma",
    "fd_validate",
    "gaussian_moment",
    "gbm_terminal",
    "greeks",
    "hedging_error",
    "lambda2_star",
    "lambda_star",
    "mean_delta_h",
    "minimize_f",
    "mshe",
    "n_bsm",
    "n_generic",
    "n_mastinsek",
    "n_star",
    "norm_cdf",
    "norm_pdf",
    "normal_draws",
    "path_draw",
    "price",
    "render_heatmap",
    "sample_delta_h",
    "share_count",
    "start_coefficients",
    "step",
    "sweep",
    "theta_psi",
    "validate",
    "var_delta_h",
    "__version__",
]
