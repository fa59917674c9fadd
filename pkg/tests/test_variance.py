"""Analytic hedging-error moment tests.

Coverage:
- coefficient construction: frozen values, diffusion-free and zero-interval
  structure, the alternate omega reconstruction,
- theta/psi substitutions,
- gaussian moments,
- the variance polynomial: hand cases and a sampling cross-check,
- mean and mean-square error assembly,
- the minimizer line: trivial case, constancy along the line, gradient check,
  grid-search agreement, degeneracy,
- relationship to the share-count formulas in the diffusion-free case.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from viewhedge import (
    DegenerateDenominatorError,
    ErrorCoefficients,
    LinearDrift,
    MarketView,
    OptionSpec,
    OrnsteinUhlenbeck,
    coefficients,
    gaussian_moment,
    greeks,
    lambda2_star,
    mean_delta_h,
    minimize_f,
    mshe,
    sample_delta_h,
    theta_psi,
    var_delta_h,
)
from viewhedge.variance import gaussian_even_moment

CANON = OptionSpec(spot=100.0, strike=100.0, rate=0.05, vol_hat=0.2, maturity=0.1)
G = greeks(CANON)


def make_coeffs(**overrides) -> ErrorCoefficients:
    base = dict(gamma=0.0, beta=0.0, delta=0.0, phi=0.0, eta=0.0, eps=0.0,
                xi=0.0, omega=0.0, tau=0.0, iota=0.0, chi=0.0, mean_term=0.0)
    base.update(overrides)
    return ErrorCoefficients(**base)


def random_coeffs(rng) -> ErrorCoefficients:
    # scales loosely follow the canonical example's magnitudes
    values = rng.uniform(-0.5, 0.5, size=12)
    return ErrorCoefficients(*values)


class TestCoefficients:
    def test_frozen_canonical_values(self):
        view = MarketView(mu=0.05, dt=0.02,
                          vol_process=LinearDrift(mu_sigma=0.1, sigma0=0.2))
        c = coefficients(G, view, CANON.spot, CANON.rate)
        assert c.gamma == pytest.approx(0.25077255672884171, rel=1e-12)
        assert c.beta == pytest.approx(0.042426406871192851, rel=1e-12)

    def test_diffusion_free_zeros(self):
        view = MarketView(mu=0.10, dt=0.02,
                          vol_process=LinearDrift(mu_sigma=0.3, sigma0=0.2))
        c = coefficients(G, view, CANON.spot, CANON.rate)
        assert (c.eps, c.xi, c.omega, c.tau, c.iota, c.chi) == (0.0,) * 6
        assert c.gamma > 0
        assert c.mean_term != 0.0

    def test_zero_interval_all_vanish(self):
        view = MarketView(mu=0.10, dt=0.0,
                          vol_process=OrnsteinUhlenbeck(kappa=2.0, theta_bar=0.3,
                                                        alpha=0.3, sigma0=0.2))
        c = coefficients(G, view, CANON.spot, CANON.rate)
        for name in ("gamma", "beta", "delta", "phi", "eta", "eps", "xi",
                     "omega", "tau", "iota", "chi", "mean_term"):
            assert getattr(c, name) == 0.0, name

    def test_omega_reconstruction_flag(self):
        # default carries the vega-time cross term; the literal variant keeps
        # the bare g0*dt^(3/2) summand
        ou = OrnsteinUhlenbeck(kappa=2.0, theta_bar=0.3, alpha=0.3, sigma0=0.2)
        view = MarketView(mu=0.10, dt=0.02, vol_process=ou)
        c_default = coefficients(G, view, CANON.spot, CANON.rate)
        c_literal = coefficients(G, view, CANON.spot, CANON.rate, literal_omega=True)
        g0, dt32 = 0.3, 0.02 ** 1.5
        assert not c_default.literal_omega and c_literal.literal_omega
        expected_shift = g0 * dt32 - 0.5 * G.v_sigt * g0 * dt32
        assert math.isclose(c_literal.omega - c_default.omega, expected_shift,
                            rel_tol=1e-12)
        # everything except omega agrees
        for name in ("gamma", "beta", "delta", "phi", "eta", "eps", "xi",
                     "tau", "iota", "chi", "mean_term"):
            assert getattr(c_default, name) == getattr(c_literal, name), name


class TestThetaPsi:
    def test_unit_lambdas_leave_gamma_beta(self):
        c = make_coeffs(gamma=2.0, beta=0.5, delta=0.1, phi=0.7, eta=0.3)
        theta, _ = theta_psi(c, 1.0, 1.0)
        assert theta == pytest.approx(1.0, rel=1e-14)  # gamma*beta

    def test_psi_without_phi(self):
        c = make_coeffs(gamma=2.0, delta=0.25)
        _, psi = theta_psi(c, 0.0, 0.0)
        assert psi == pytest.approx(0.5, rel=1e-14)  # gamma*delta

    def test_zero_lambdas_substitution(self):
        c = make_coeffs(gamma=2.0, beta=0.5, delta=0.1, phi=0.7, eta=0.3)
        theta, psi = theta_psi(c, 0.0, 0.0)
        assert theta == pytest.approx(2.0 * 0.5 + 0.7 + 0.3, rel=1e-14)
        assert psi == pytest.approx(2.0 * 0.1 - 0.7 / 3.0, rel=1e-14)


class TestGaussianMoments:
    def test_even_moments(self):
        assert gaussian_even_moment(1) == 1.0
        assert gaussian_even_moment(2) == 3.0
        assert gaussian_even_moment(3) == 15.0

    def test_general_query(self):
        assert gaussian_moment(0) == 1.0
        assert gaussian_moment(1) == 0.0
        assert gaussian_moment(7) == 0.0
        assert gaussian_moment(4) == 3.0
        assert gaussian_moment(6) == 15.0

    def test_overflow(self):
        with pytest.raises(OverflowError):
            gaussian_even_moment(200)


class TestVarDeltaH:
    def test_all_zero(self):
        assert var_delta_h(make_coeffs(), 0.0, 0.0) == 0.0

    def test_theta_only(self):
        # theta = eta at lambda2 = 0 when everything else is zero
        c = make_coeffs(eta=2.0)
        assert var_delta_h(c, 0.0, 0.0) == pytest.approx(4.0, rel=1e-14)

    def test_nonnegative_on_random_coefficients(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            c = random_coeffs(rng)
            lam1, lam2 = rng.uniform(-5, 5, size=2)
            assert var_delta_h(c, lam1, lam2) >= 0.0

    def test_matches_sampling_oracle(self):
        # draw the error expression directly over normal pairs and compare
        rng = np.random.default_rng(123)
        c = random_coeffs(rng)
        z1 = rng.standard_normal(2_000_000)
        z2 = rng.standard_normal(2_000_000)
        samples = sample_delta_h(c, 0.7, -0.4, z1, z2)
        analytic = var_delta_h(c, 0.7, -0.4)
        est = samples.var(ddof=1)
        # stderr of a sample variance ~ sqrt((m4 - var^2)/n)
        m4 = np.mean((samples - samples.mean()) ** 4)
        stderr = math.sqrt((m4 - est**2) / len(samples))
        assert abs(est - analytic) < 4 * stderr


class TestMeanAndMshe:
    def test_mean_is_iota_plus_mean_term(self):
        c = make_coeffs(iota=0.25, mean_term=-0.1)
        assert mean_delta_h(c) == pytest.approx(0.15, rel=1e-14)

    def test_all_zero(self):
        assert mshe(make_coeffs(), 0.0, 0.0) == 0.0

    def test_iota_and_mean_hand_case(self):
        # Var = 2*iota^2 = 2; mean = iota + mean_term = 2; MSHE = 2 + 4
        c = make_coeffs(iota=1.0, mean_term=1.0)
        assert var_delta_h(c, 0.0, 0.0) == pytest.approx(2.0, rel=1e-14)
        assert mshe(c, 0.0, 0.0) == pytest.approx(6.0, rel=1e-14)

    def test_matches_sampling_oracle(self):
        rng = np.random.default_rng(321)
        c = random_coeffs(rng)
        z1 = rng.standard_normal(2_000_000)
        z2 = rng.standard_normal(2_000_000)
        samples = sample_delta_h(c, -1.2, 0.9, z1, z2)
        sq = samples**2
        est = sq.mean()
        stderr = sq.std(ddof=1) / math.sqrt(len(sq))
        assert abs(est - mshe(c, -1.2, 0.9)) < 4 * stderr


class TestMinimizeF:
    def test_trivial_line_is_lambda2_one(self):
        # gamma*beta = phi = psi = xi = 0 with live eta: theta vanishes at
        # lambda2 = 1 independent of lambda1
        c = make_coeffs(eta=0.5)
        line = minimize_f(c)
        assert line.intercept == pytest.approx(1.0, rel=1e-14)
        assert line.slope == 0.0
        assert line.min_value == pytest.approx(var_delta_h(c, 0.0, 1.0), rel=1e-14)

    def test_degenerate_without_eta(self):
        with pytest.raises(DegenerateDenominatorError):
            minimize_f(make_coeffs(gamma=1.0, beta=0.5))

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10_000))
    def test_constant_along_line_and_gradient_vanishes(self, seed):
        rng = np.random.default_rng(seed)
        c = random_coeffs(rng)
        if abs(c.eta) < 1e-3:
            c = ErrorCoefficients(c.gamma, c.beta, c.delta, c.phi, 0.3, c.eps,
                                  c.xi, c.omega, c.tau, c.iota, c.chi,
                                  c.mean_term)
        line = minimize_f(c)
        values = [var_delta_h(c, lam1, line.lambda2_at(lam1))
                  for lam1 in (-2.0, 0.0, 3.0)]
        scale = max(abs(v) for v in values) or 1.0
        assert max(values) - min(values) <= 1e-12 * scale
        # central difference in lambda2 at the line
        h = 1e-6
        for lam1 in (-2.0, 0.0, 3.0):
            lam2 = line.lambda2_at(lam1)
            grad = (var_delta_h(c, lam1, lam2 + h)
                    - var_delta_h(c, lam1, lam2 - h)) / (2 * h)
            assert abs(grad) < 1e-8 * max(scale, 1.0)

    def test_grid_search_agrees(self):
        # deterministic instances; grid spans [-5, 5]^2 so instances are
        # conditioned to keep the minimizer line inside the box
        rng = np.random.default_rng(2024)
        found = 0
        lam1s = np.linspace(-5.0, 5.0, 101)
        lam2s = np.linspace(-5.0, 5.0, 101)
        while found < 5:
            c = random_coeffs(rng)
            if abs(c.eta) < 0.2:
                continue
            line = minimize_f(c)
            if abs(line.intercept) > 4.0 or abs(line.intercept + 5 * line.slope) > 4.0:
                continue
            found += 1
            grid_min = min(var_delta_h(c, l1, l2) for l1 in lam1s for l2 in lam2s)
            assert grid_min >= line.min_value - 1e-12
            assert grid_min - line.min_value < 1e-9 + 0.51 * abs(line.slope
                                                                 ) * 0.1 ** 2

    def test_line_matches_hedge_side_lambda2_star(self):
        view = MarketView(mu=0.10, dt=0.02,
                          vol_process=OrnsteinUhlenbeck(kappa=2.0, theta_bar=0.3,
                                                        alpha=0.3, sigma0=0.2))
        c = coefficients(G, view, CANON.spot, CANON.rate)
        line = minimize_f(c)
        for lam1 in (-2.0, 0.0, 1.0, 3.0):
            hedge_side = lambda2_star(G, view, CANON.spot, CANON.rate, lam1)
            assert math.isclose(line.lambda2_at(lam1), hedge_side, rel_tol=1e-9)

    def test_diffusion_free_reproduces_drift_adjusted_structure(self):
        # with g0=0 the only surviving lambda2 term is eta = v_ssig*f0*dt^(3/2)*...
        # and the minimizing share count equals the drift-adjusted one plus the
        # vega-drift correction; verified through the hedge-side identity
        view = MarketView(mu=0.10, dt=0.02,
                          vol_process=LinearDrift(mu_sigma=0.3, sigma0=0.2))
        c = coefficients(G, view, CANON.spot, CANON.rate)
        line = minimize_f(c)
        hedge_side = lambda2_star(G, view, CANON.spot, CANON.rate, 0.0)
        assert math.isclose(line.intercept, hedge_side, rel_tol=1e-9)


class TestSampleDeltaH:
    def test_zero_coefficients_constant(self):
        c = make_coeffs(mean_term=0.5)
        out = sample_delta_h(c, 0.0, 0.0, np.zeros(4), np.zeros(4))
        assert np.all(out == 0.5)

    def test_mean_matches_analytic(self):
        rng = np.random.default_rng(99)
        c = random_coeffs(rng)
        z1 = rng.standard_normal(2_000_000)
        z2 = rng.standard_normal(2_000_000)
        samples = sample_delta_h(c, 0.3, 1.4, z1, z2)
        stderr = samples.std(ddof=1) / math.sqrt(len(samples))
        assert abs(samples.mean() - mean_delta_h(c)) < 4 * stderr
