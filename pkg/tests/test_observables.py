"""Tests for distributions, survival, the weak limit and pointwise asymptotics."""

import numpy as np
import pytest

from expansion.decompose import TimeBoundError, expand
from observables.asymptotics import pointwise_asymptotics, pointwise_frame, restricted_state_profile
from observables.distribution import distribution, heatmap_frame
from observables.survival import (
    mean_survival_time,
    restricted_state_tau,
    survival,
    upsilon,
)
from observables.weak_limit import restricted_weak_limit, time_series_frame, weak_limit
from resonances.solver import find_resonances
from resonances.states import resonant_state
from tools.errors import DomainError
from walk.coins import CoinSequence
from walk.states import IntervalError, IntervalZ, WalkState


@pytest.fixture
def restricted_setup(barrier):
    """Normalized 𝟙_Jφ_λ for the leading double-barrier resonance on J = [−1, 6]."""
    interval = IntervalZ(-1, 6)
    resonances, _ = find_resonances(barrier.coins)
    lam = resonances[0].lam
    psi = resonant_state(barrier.coins, lam).restricted(interval).normalized()
    return barrier.coins, psi, interval, lam


class TestDistribution:
    """Test the position distribution μ_n."""

    def test_should_sum_to_one(self, barrier_setup):
        """Test μ_n(ℤ) = 1 by unitarity."""
        coins, psi, _ = barrier_setup

        dist = distribution(coins, psi, 30)

        assert dist.total == pytest.approx(1.0, abs=1e-12)
        assert dist.mass(range(-100, 100)) == pytest.approx(1.0, abs=1e-12)

    def test_should_refuse_zero_state(self, barrier):
        """Test that ψ = 0 has no distribution."""
        with pytest.raises(DomainError):
            distribution(barrier.coins, WalkState.zeros(IntervalZ(0, 1)), 3)

    def test_should_build_heatmap_frame(self, single_coin, localized_state):
        """Test the long-format x, n, amp frame."""
        frame = heatmap_frame(single_coin, localized_state, 5)

        assert list(frame.columns) == ["x", "n", "amp"]
        assert sorted(frame["n"].unique()) == list(range(6))
        assert (frame["amp"] >= 0).all()


class TestSurvival:
    """Test the survival series, decay fit and mean survival time."""

    def test_should_evaluate_upsilon_closed_forms(self):
        """Test Υ₁, Υ₃ and Υ₅ against their rational forms."""
        r = 0.4
        assert upsilon(1, r) == pytest.approx(2 / (1 - r**2) ** 2)
        assert upsilon(3, r) == pytest.approx(24 * r**2 * (1 + r**2) / (1 - r**2) ** 4)
        assert upsilon(5, r) == pytest.approx(
            240 * r**4 * (3 * r**4 + 10 * r**2 + 3) / (1 - r**2) ** 6
        )

    def test_should_evaluate_upsilon_at_zero(self):
        """Test Υ_k(0) = 2 for k ≤ 2 and 0 beyond."""
        assert upsilon(1, 0.0) == 2.0
        assert upsilon(2, 0.0) == 2.0
        assert upsilon(3, 0.0) == 0.0

    @pytest.mark.parametrize("k, r", [(0, 0.5), (1, 1.0), (2, -0.1)])
    def test_should_reject_upsilon_outside_domain(self, k, r):
        """Test that k < 1 and r outside [0, 1) raise."""
        with pytest.raises(DomainError):
            upsilon(k, r)

    def test_should_compute_restricted_tau(self):
        """Test τ = 1/(1−|λ|²) and its divergence on the unit circle."""
        assert restricted_state_tau(0.6j) == pytest.approx(1 / 0.64)
        with pytest.raises(DomainError):
            restricted_state_tau(1.0)

    def test_should_fit_resonance_decay_rate(self, barrier_setup):
        """Test that ‖𝟙_JUⁿψ‖ decays at log Λ(ψ) = log(2^{-1/2})/5."""
        coins, psi, interval = barrier_setup

        frame, report = survival(coins, psi, interval, 200, window=(50, 200))

        assert list(frame.columns) == ["n", "survival", "probability"]
        assert report.norm_log_slope == pytest.approx(np.log(2**-0.5) / 5, rel=0.01)
        assert report.slope_error <= 0.01
        assert report.envelope_holds
        assert report.fit_window == (50, 200)

    def test_should_require_interval_containing_support(self, barrier):
        """Test the J ⊇ supp ψ ∪ chs precondition."""
        psi = WalkState.from_sites({9: (1.0, 0.0)})

        with pytest.raises(IntervalError):
            survival(barrier.coins, psi, IntervalZ(-1, 6), 50)

    def test_should_agree_between_site_and_flux_forms(self, barrier_setup):
        """Test the boundary-site sum against Σn(s_{n−1} − s_n) and the Υ bound."""
        coins, psi, interval = barrier_setup

        report = mean_survival_time(coins, psi, interval, 400)

        assert report.tau == pytest.approx(report.tau_flux, abs=1e-8)
        assert report.bound_holds
        assert report.tau > 0

    def test_should_measure_envelope_on_survival_series(self, barrier_setup):
        """Test that M bounds ‖𝟙_JUⁿψ‖ against Λ₀ⁿ and enters the Υ bound squared."""
        coins, psi, interval = barrier_setup
        n_max = 400

        report = mean_survival_time(coins, psi, interval, n_max)
        frame, decay = survival(coins, psi, interval, n_max)

        ratios = np.sqrt(frame["probability"]) / decay.lambda0 ** frame["n"]
        assert decay.m0 == 1
        assert report.M == pytest.approx(float(ratios.max()), rel=1e-9)
        assert report.M >= 1.0
        expected = report.M**2 * 0.5 * upsilon(1, decay.lambda0)
        assert report.bound_lambda0 == pytest.approx(expected, rel=1e-9)

    def test_should_flag_bound_built_on_undersized_envelope(self, barrier_setup):
        """Test that too small M and M′ make the Υ bound fail."""
        coins, psi, interval = barrier_setup

        report = mean_survival_time(coins, psi, interval, 400, envelope=(1e-3, 1e-3))

        assert report.M == report.M_prime == 1e-3
        assert report.bound < report.tau
        assert not report.bound_holds

    def test_should_match_restricted_state_tau(self, restricted_setup):
        """Test τ(J, 𝟙_Jφ_λ) = 1/(1−|λ|²)."""
        coins, psi, interval, lam = restricted_setup

        report = mean_survival_time(coins, psi, interval, 400, restricted_lambda=lam)

        assert report.restricted_tau == pytest.approx(1 / (1 - abs(lam) ** 2))
        assert abs(report.tau - report.restricted_tau) <= report.tail_bound + 1e-6

    def test_should_decay_exactly_for_restricted_state(self, restricted_setup):
        """Test ‖𝟙_JUⁿψ‖ = |λ|ⁿ‖ψ‖ for ψ = 𝟙_Jφ_λ."""
        coins, psi, interval, lam = restricted_setup

        frame, _ = survival(coins, psi, interval, 60)

        expected = np.abs(lam) ** (2 * frame["n"].to_numpy())
        assert np.allclose(frame["probability"], expected, atol=1e-12)


class TestWeakLimit:
    """Test the escaped masses c±."""

    def test_should_match_restricted_closed_form(self, restricted_setup):
        """Test ĉ±(n) → a±/(a₋ + a₊) for ψ = 𝟙_Jφ_λ."""
        coins, psi, interval, lam = restricted_setup
        closed = restricted_weak_limit(coins, lam, interval)

        report = weak_limit(coins, psi, 200, closed_form=closed)

        assert sum(closed) == pytest.approx(1.0)
        assert report.within_bound
        assert report.total == pytest.approx(1.0, abs=1e-10)

    def test_should_be_consistent_across_times(self, barrier_setup):
        """Test that estimates at different times agree within their flat norms."""
        coins, psi, _ = barrier_setup

        early = weak_limit(coins, psi, 40)
        late = weak_limit(coins, psi, 120)

        assert early.consistent_with(late)
        assert late.flat_norm < early.flat_norm

    def test_should_split_free_walk_by_chirality(self):
        """Test that the free walk sends L left and R right for good."""
        psi = WalkState.from_sites({0: (0.6, 0.8)})

        report = weak_limit(CoinSequence.free(), psi, 3)

        assert report.c_minus == pytest.approx(0.36)
        assert report.c_plus == pytest.approx(0.64)
        assert report.flat_norm == pytest.approx(0.0)

    def test_should_build_time_series_frame(self, barrier_setup):
        """Test the n, survival, c_plus, c_minus, flat_norm frame."""
        coins, psi, interval = barrier_setup

        frame = time_series_frame(coins, psi, interval, 20)

        assert list(frame.columns) == ["n", "survival", "c_plus", "c_minus", "flat_norm"]
        assert len(frame) == 21
        totals = frame["c_plus"] + frame["c_minus"] + frame["flat_norm"]
        assert np.allclose(totals, 1.0, atol=1e-12)


class TestPointwiseAsymptotics:
    """Test the leading-term prediction of μ_n(x)."""

    def test_should_predict_within_remainder_bound(self, barrier_setup):
        """Test the leading term at a barrier site."""
        coins, psi, interval = barrier_setup
        expansion = expand(coins, psi, interval)

        report = pointwise_asymptotics(expansion, 3, 60)

        assert report.within
        assert report.predicted == pytest.approx(report.direct, abs=1e-8)
        assert report.remainder_scale == 0.0

    def test_should_refuse_sites_outside_prediction_region(self, barrier_setup):
        """Test the x and n preconditions."""
        coins, psi, interval = barrier_setup
        expansion = expand(coins, psi, interval)

        with pytest.raises(IntervalError):
            pointwise_asymptotics(expansion, 200, 60)
        with pytest.raises(TimeBoundError):
            pointwise_asymptotics(expansion, 3, 10)

    def test_should_skip_early_times_in_frame(self, barrier_setup):
        """Test that pointwise_frame drops times before the formula applies."""
        coins, psi, interval = barrier_setup
        expansion = expand(coins, psi, interval)

        frame = pointwise_frame(expansion, 2, [5, 30, 40])

        assert list(frame["n"]) == [30, 40]
        assert "ratio" in frame.columns

    def test_should_give_restricted_state_profile(self, restricted_setup):
        """Test the closed-form μ_n of 𝟙_Jφ_λ against direct evolution."""
        coins, psi, interval, lam = restricted_setup
        n = 7

        profile = restricted_state_profile(coins, lam, interval, n)
        direct = distribution(coins, psi, n)

        assert profile.index[0] == interval.lo - n
        assert profile.index[-1] == interval.hi + n
        for x, value in profile.items():
            assert value == pytest.approx(direct.at(x), abs=1e-10)
