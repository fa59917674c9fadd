"""Share-count formula tests.

Coverage:
- plain delta hedge and its decomposition,
- the drift-adjusted count, frozen-value check, mu=r and dt=0 reductions,
- the two-parameter family and its parameter selections,
- optimal lambda2(lambda1): trivial value, degeneracy, lambda1 independence,
- optimal single lambda: frozen value and algebraic special cases,
- the view-adjusted count: reductions, term structure, consistency with the
  lambda formulas, monotonicity in the drift view, dt -> 0 behavior,
- validation of view fields.
"""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from viewhedge import (
    CIR,
    DegenerateDenominatorError,
    DomainError,
    LinearDrift,
    MarketView,
    OptionSpec,
    OrnsteinUhlenbeck,
    greeks,
    lambda2_star,
    lambda_star,
    n_bsm,
    n_generic,
    n_mastinsek,
    n_star,
)

CANON = OptionSpec(spot=100.0, strike=100.0, rate=0.05, vol_hat=0.2, maturity=0.1)
G = greeks(CANON)


def lin_view(mu: float, dt: float = 0.02, mu_sigma: float = 0.0) -> MarketView:
    return MarketView(mu=mu, dt=dt,
                      vol_process=LinearDrift(mu_sigma=mu_sigma, sigma0=CANON.vol_hat))


def assert_decomposition_sums(ratio):
    total = (ratio.base + ratio.drift_term + ratio.time_decay_term
             + ratio.vol_drift_term + ratio.vol_convexity_term)
    assert math.isclose(ratio.n_shares, total, rel_tol=1e-12)


class TestNBsm:
    def test_canonical(self):
        ratio = n_bsm(G)
        assert ratio.n_shares == pytest.approx(0.5441, abs=5e-5)
        assert ratio.n_shares == G.v_s
        assert (ratio.drift_term, ratio.time_decay_term, ratio.vol_drift_term,
                ratio.vol_convexity_term) == (0.0, 0.0, 0.0, 0.0)

    def test_deep_itm(self):
        deep = greeks(OptionSpec(spot=300.0, strike=100.0, rate=0.05,
                                 vol_hat=0.2, maturity=0.01))
        assert n_bsm(deep).n_shares == pytest.approx(1.0, abs=1e-3)

    def test_decomposition(self):
        assert_decomposition_sums(n_bsm(G))


class TestNMastinsek:
    def test_mu_equals_r_reduces_to_delta(self):
        ratio = n_mastinsek(G, lin_view(mu=0.05), CANON.spot, CANON.rate)
        assert ratio.n_shares == G.v_s

    def test_frozen_canonical_value(self):
        # mu=0.10, dt=0.02: delta + 0.05*100*v_ss*0.02
        ratio = n_mastinsek(G, lin_view(mu=0.10), CANON.spot, CANON.rate)
        assert ratio.n_shares == pytest.approx(0.5503341490394513, rel=1e-12)

    def test_zero_interval(self):
        ratio = n_mastinsek(G, lin_view(mu=0.10, dt=0.0), CANON.spot, CANON.rate)
        assert ratio.n_shares == G.v_s

    def test_decomposition(self):
        ratio = n_mastinsek(G, lin_view(mu=0.10), CANON.spot, CANON.rate)
        assert ratio.drift_term != 0.0
        assert_decomposition_sums(ratio)


class TestNGeneric:
    def test_zero_lambdas_reduce_to_delta(self):
        view = lin_view(mu=0.10, mu_sigma=0.3)
        assert n_generic(G, view, 0.0, 0.0).n_shares == G.v_s

    def test_naive_time_decay_selection(self):
        view = lin_view(mu=0.10)
        ratio = n_generic(G, view, 1.0, 0.0)
        assert math.isclose(ratio.n_shares, G.v_s + G.v_st * 0.02, rel_tol=1e-14)

    def test_frozen_canonical_value(self):
        # lambda1=0, lambda2=1, mu_sigma=0.1, dt=0.02
        view = lin_view(mu=0.10, mu_sigma=0.1)
        ratio = n_generic(G, view, 0.0, 1.0)
        assert ratio.n_shares == pytest.approx(0.54387675570368362, rel=1e-12)

    def test_decomposition(self):
        ratio = n_generic(G, lin_view(mu=0.10, mu_sigma=0.1), 0.7, -1.3)
        assert_decomposition_sums(ratio)


class TestLambda2Star:
    def test_trivial_case_is_one(self):
        # g0=0, mu=r, lambda1=0: numerator equals denominator
        view = lin_view(mu=0.05, mu_sigma=0.1)
        assert lambda2_star(G, view, CANON.spot, CANON.rate, 0.0) == 1.0

    def test_degenerate_without_vol_drift(self):
        view = lin_view(mu=0.10, mu_sigma=0.0)
        with pytest.raises(DegenerateDenominatorError):
            lambda2_star(G, view, CANON.spot, CANON.rate, 0.0)

    @settings(max_examples=100, deadline=None)
    @given(mu=st.floats(min_value=-0.5, max_value=0.5),
           mu_sigma=st.floats(min_value=0.02, max_value=0.5))
    def test_result_independent_of_lambda1(self, mu, mu_sigma):
        view = lin_view(mu=mu, mu_sigma=mu_sigma)
        counts = [
            n_generic(G, view, lam1,
                      lambda2_star(G, view, CANON.spot, CANON.rate, lam1)).n_shares
            for lam1 in (-2.0, 0.0, 1.0, 3.0)
        ]
        spread = max(counts) - min(counts)
        assert spread <= 1e-12 * max(abs(c) for c in counts)


class TestLambdaStar:
    def test_zero_when_everything_vanishes(self):
        view = lin_view(mu=0.05, mu_sigma=0.0)
        assert lambda_star(G, view, CANON.spot, CANON.rate) == 0.0

    def test_mu_equals_r_linear_drift_form(self):
        view = lin_view(mu=0.05, mu_sigma=0.3)
        f0 = 0.3
        expected = G.v_ssig * f0 / (G.v_ssig * f0 + G.v_st)
        got = lambda_star(G, view, CANON.spot, CANON.rate)
        assert math.isclose(got, expected, rel_tol=1e-14)

    def test_frozen_canonical_value(self):
        view = lin_view(mu=0.05, mu_sigma=0.1)
        got = lambda_star(G, view, CANON.spot, CANON.rate)
        assert got == pytest.approx(0.041095890410958904, rel=1e-12)

    def test_degenerate_denominator(self):
        # LinearDrift with f0 chosen so v_ssig*f0 = -v_st kills the denominator
        f0 = -G.v_st / G.v_ssig
        view = lin_view(mu=0.10, mu_sigma=f0)
        with pytest.raises(DegenerateDenominatorError):
            lambda_star(G, view, CANON.spot, CANON.rate)


class TestNStar:
    def test_reduces_to_delta(self):
        ratio = n_star(G, lin_view(mu=0.05, mu_sigma=0.0), CANON.spot, CANON.rate)
        assert ratio.n_shares == G.v_s

    def test_diffusion_free_equals_mastinsek_plus_vega_drift(self):
        # with g0=0 the added term is exactly v_ssig*mu_sigma*dt
        view = lin_view(mu=0.10, mu_sigma=0.3)
        star = n_star(G, view, CANON.spot, CANON.rate)
        mast = n_mastinsek(G, view, CANON.spot, CANON.rate)
        assert star.drift_term == mast.drift_term
        assert math.isclose(star.n_shares, mast.n_shares + G.v_ssig * 0.3 * 0.02,
                            rel_tol=1e-14)

    def test_ou_term_structure(self):
        # OU at mu=r: f0 = 2*(0.3-0.2) = 0.2, g0^2 = 0.09
        ou = OrnsteinUhlenbeck(kappa=2.0, theta_bar=0.3, alpha=0.3, sigma0=0.2)
        view = MarketView(mu=0.05, dt=0.02, vol_process=ou)
        ratio = n_star(G, view, CANON.spot, CANON.rate)
        assert ratio.drift_term == 0.0
        assert math.isclose(ratio.vol_drift_term, G.v_ssig * 0.2 * 0.02, rel_tol=1e-14)
        assert math.isclose(ratio.vol_convexity_term, 0.5 * G.v_ssigsig * 0.09 * 0.02,
                            rel_tol=1e-14)
        expected = G.v_s + G.v_ssig * 0.2 * 0.02 + 0.5 * G.v_ssigsig * 0.09 * 0.02
        assert math.isclose(ratio.n_shares, expected, rel_tol=1e-13)

    def test_cir_vs_ou_convexity_scales_with_sigma0(self):
        # same (kappa, theta_bar, alpha): CIR g0^2 = alpha^2*sigma0 vs OU alpha^2
        ou = OrnsteinUhlenbeck(kappa=2.0, theta_bar=0.3, alpha=0.3, sigma0=0.2)
        cir = CIR(kappa=2.0, theta_bar=0.3, alpha=0.3, sigma0=0.2)
        r_ou = n_star(G, MarketView(mu=0.05, dt=0.02, vol_process=ou),
                      CANON.spot, CANON.rate)
        r_cir = n_star(G, MarketView(mu=0.05, dt=0.02, vol_process=cir),
                       CANON.spot, CANON.rate)
        assert r_ou.vol_drift_term == r_cir.vol_drift_term
        assert math.isclose(r_cir.vol_convexity_term,
                            0.2 * r_ou.vol_convexity_term, rel_tol=1e-12)

    def test_consistency_with_lambda_star(self):
        view = lin_view(mu=0.10, mu_sigma=0.1)
        lam = lambda_star(G, view, CANON.spot, CANON.rate)
        star = n_star(G, view, CANON.spot, CANON.rate)
        gen = n_generic(G, view, lam, lam)
        assert math.isclose(star.n_shares, gen.n_shares, rel_tol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(mu=st.floats(min_value=-0.5, max_value=0.5),
           lam1=st.floats(min_value=-3.0, max_value=3.0),
           mu_sigma=st.floats(min_value=0.02, max_value=0.5))
    def test_consistency_with_lambda2_star(self, mu, lam1, mu_sigma):
        view = lin_view(mu=mu, mu_sigma=mu_sigma)
        lam2 = lambda2_star(G, view, CANON.spot, CANON.rate, lam1)
        star = n_star(G, view, CANON.spot, CANON.rate)
        gen = n_generic(G, view, lam1, lam2)
        assert math.isclose(star.n_shares, gen.n_shares, rel_tol=1e-12)

    def test_monotone_in_drift_view(self):
        counts = [n_star(G, lin_view(mu=mu, mu_sigma=0.1), CANON.spot,
                         CANON.rate).n_shares
                  for mu in (-0.3, 0.0, 0.05, 0.2, 0.5)]
        assert counts == sorted(counts)

    def test_linear_in_dt_near_zero(self):
        # n_star - delta shrinks linearly: halving dt halves the gap
        view1 = lin_view(mu=0.10, dt=0.01, mu_sigma=0.1)
        view2 = lin_view(mu=0.10, dt=0.005, mu_sigma=0.1)
        gap1 = n_star(G, view1, CANON.spot, CANON.rate).n_shares - G.v_s
        gap2 = n_star(G, view2, CANON.spot, CANON.rate).n_shares - G.v_s
        assert gap1 / gap2 == pytest.approx(2.0, rel=1e-10)


class TestMarketViewValidation:
    def test_zero_interval_allowed(self):
        view = lin_view(mu=0.05, dt=0.0)
        assert view.dt == 0.0

    def test_negative_interval_rejected(self):
        with pytest.raises(DomainError, match="dt"):
            lin_view(mu=0.05, dt=-0.01)

    def test_nonfinite_mu_rejected(self):
        with pytest.raises(DomainError, match="mu"):
            lin_view(mu=float("nan"))
