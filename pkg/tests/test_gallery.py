"""Tests for the model walks, the coin group, perturbations and symmetries."""

import numpy as np
import pytest

from config.globals import EPS0
from gallery.group import GroupElement, OutsideGroupError, from_group, group_product, to_group
from gallery.models import (
    double_barrier,
    double_barrier_amplitudes,
    random_kz_walk,
    random_walk,
    triple_barrier,
)
from gallery.perturbation import (
    gamma,
    gamma_finite_difference,
    generic_theta,
    perturb,
    splitting_report,
)
from gallery.symmetry import (
    GaugeConditionError,
    check_gauge_condition,
    conjugate_state,
    conjugation_defect,
    gauge_transform,
    rotation_defect,
)
from resonances.roots import multiset_distance
from resonances.solver import find_resonances
from resonances.states import eigen_residual, resonant_state
from tools.errors import DomainError
from walk.coins import Coin, CoinSequence
from walk.evolution import evolve
from walk.states import IntervalZ, WalkState


class TestModels:
    """Test the closed-form model walks."""

    def test_should_build_double_barrier(self, barrier):
        """Test α = −r² and Λ₀ = r^{1/k}."""
        assert barrier.alpha == pytest.approx(-0.5)
        assert barrier.lambda0 == pytest.approx(2 ** (-1 / 10))
        assert len(barrier.resonances) == 10
        assert np.allclose(barrier.resonances**10, -0.5)

    def test_should_give_closed_form_resonant_states(self, barrier):
        """Test that the recursion-built states solve (U−λ)φ = 0."""
        window = IntervalZ(-3, 8)
        for j in (1, 4, 10):
            state = barrier.state(j, window)
            lam = complex(barrier.resonances[j - 1])
            assert eigen_residual(barrier.coins, lam, state) <= 1e-9

    def test_should_transport_amplitudes_between_barriers(self):
        """Test Uⁿψ(n+1) = (0, a_n) and Uⁿψ(2N−1−n) = (b_n, 0) against direct evolution."""
        model = double_barrier(5, 0.6, interior=[0.3, -0.1, 0.7, 0.2])
        psi = WalkState.from_sites({1: (0.0, 1.0)})
        a, b = double_barrier_amplitudes(model.coins, 10)

        for n in range(5):
            assert np.allclose(evolve(model.coins, psi, n).at(n + 1), [0.0, a[n]], atol=1e-14)
        for n in range(5, 10):
            assert np.allclose(evolve(model.coins, psi, n).at(9 - n), [b[n], 0.0], atol=1e-14)
        assert a[1] == pytest.approx(np.exp(-0.3j))
        assert b[5] == pytest.approx(a[4] * 0.6)

    def test_should_place_interior_phases(self):
        """Test that diagonal interior coins rotate the spectrum through α."""
        model = double_barrier(3, 0.6, interior=[0.2, -0.4])

        resonances, _ = find_resonances(model.coins)

        expected = [(lam, 1) for lam in model.resonances]
        assert multiset_distance([(r.lam, r.multiplicity) for r in resonances], expected) <= 1e-8

    @pytest.mark.parametrize("r", [0.0, 1.0, 1.5])
    def test_should_reject_degenerate_amplitude(self, r):
        """Test that r must lie in (0, 1)."""
        with pytest.raises(DomainError):
            double_barrier(5, r)

    def test_should_reject_wrong_interior_length(self):
        """Test that one phase per interior site is required."""
        with pytest.raises(DomainError):
            double_barrier(4, 0.5, interior=[0.1])

    def test_should_flag_double_root_family(self, triple):
        """Test the quartic (λ² + ½)² on the critical family."""
        roots = triple.roots()

        assert triple.multiplicity_two
        assert np.allclose(triple.quartic, [0.25, 0.0, 1.0, 0.0, 1.0])
        assert np.allclose(np.sort(np.abs(roots)), 2**-0.5, atol=1e-6)

    def test_should_not_flag_symmetric_triple(self):
        """Test that r₋₁ = r₁ stays off the double-root family."""
        assert not triple_barrier(0.5, 0.5, 0.5).multiplicity_two

    def test_should_draw_kz_walks(self, rng):
        """Test that off-diagonal entries only sit on kℤ."""
        coins = random_kz_walk(3, 2, rng)

        check_gauge_condition(coins, 3)
        assert coins.chs == IntervalZ(0, 6)

    def test_should_reject_empty_random_walk(self, rng):
        """Test k ≥ 1."""
        with pytest.raises(DomainError):
            random_walk(0, rng)


class TestGroup:
    """Test the group structure on admissible coins."""

    def test_should_map_coin_back_and_forth(self, rng):
        """Test ℳ(ℳ⁻¹(C)) = C."""
        coin = Coin.random(rng)

        assert np.allclose(from_group(to_group(coin)).matrix, coin.matrix)

    def test_should_agree_between_coin_and_element_products(self, rng):
        """Test that the product commutes with ℳ."""
        a, b = Coin.random(rng), Coin.random(rng)

        direct = group_product(a, b)
        via_elements = group_product(to_group(a), to_group(b)).coin

        assert np.allclose(direct.matrix, via_elements.matrix)

    def test_should_have_identity(self, rng):
        """Test that the identity element maps to I₂ and is neutral."""
        coin = Coin.random(rng)
        identity = GroupElement.identity()

        assert np.allclose(identity.coin.matrix, np.eye(2))
        assert np.allclose(group_product(identity, to_group(coin)).coin.matrix, coin.matrix)

    def test_should_normalize_theta(self):
        """Test that (p, q, θ + π) and (−p, −q, θ) coincide."""
        p, q = np.cosh(0.3), 0.5 * np.sinh(0.3) + 0.5j * np.sqrt(3) * np.sinh(0.3)

        a = GroupElement(p, q, 0.4 + np.pi)
        b = GroupElement(-p, -q, 0.4)

        assert a.theta == pytest.approx(b.theta)
        assert np.allclose(a.transfer, b.transfer)

    def test_should_reject_non_hyperbolic_parameters(self):
        """Test |p|² − |q|² = 1."""
        with pytest.raises(OutsideGroupError):
            GroupElement(2.0, 0.0, 0.0)

    def test_should_reject_mixed_arguments(self, rng):
        """Test that a coin and an element do not multiply."""
        coin = Coin.random(rng)

        with pytest.raises(DomainError):
            group_product(coin, to_group(coin))


class TestPerturbation:
    """Test B(ϑ, ε) and the splitting of multiple resonances."""

    def test_should_match_finite_difference(self, triple):
        """Test γ against (σ_h − σ)/h."""
        lam0 = 1j / np.sqrt(2)
        for theta in (0.3, 1.7, 4.0):
            analytic = gamma(triple.coins, theta, lam0)
            numeric = gamma_finite_difference(triple.coins, theta, lam0)
            assert abs(analytic - numeric) <= 1e-4 * max(abs(analytic), 1e-6)

    def test_should_only_touch_rightmost_coin(self, triple):
        """Test that perturb replaces C(x⁺) alone."""
        perturbed = perturb(triple.coins, 0.5, 1e-3)

        assert perturbed.coin_at(-1) == triple.coins.coin_at(-1)
        assert perturbed.coin_at(0) == triple.coins.coin_at(0)
        assert perturbed.coin_at(1) != triple.coins.coin_at(1)
        assert perturb(triple.coins, 0.5, 0.0) is triple.coins

    def test_should_reject_invalid_perturbations(self, triple):
        """Test ε ∈ [0, ε₀] and a non-free walk."""
        with pytest.raises(DomainError):
            perturb(triple.coins, 0.5, 2 * EPS0)
        with pytest.raises(DomainError):
            perturb(triple.coins, 0.5, -1e-4)
        with pytest.raises(DomainError):
            perturb(CoinSequence.free(), 0.5, 1e-3)

    def test_should_sweep_theta_grid(self, triple):
        """Test the generic_theta frame."""
        frame = generic_theta(triple.coins, 1j / np.sqrt(2), grid=8)

        assert list(frame.columns) == [
            "theta",
            "gamma_re",
            "gamma_im",
            "abs_gamma",
            "fd_abs_gamma",
            "generic",
        ]
        assert len(frame) == 8
        assert frame["generic"].any()

    def test_should_split_double_resonance_at_square_root_rate(self, triple):
        """Test that displacement grows like ε^{1/2} and the split roots are simple."""
        resonances, _ = find_resonances(triple.coins)
        res = resonances[0]
        sweep = generic_theta(triple.coins, res.lam)
        theta = float(sweep.loc[sweep["abs_gamma"].idxmax(), "theta"])

        report = splitting_report(triple.coins, res, theta)

        assert report.multiplicity == 2
        assert report.slope == pytest.approx(0.5, abs=0.05)
        assert report.all_simple
        assert report.within_prediction
        assert len(report.to_dict()["rows"]) == 3

    def test_should_refuse_simple_resonance(self, barrier):
        """Test that a simple resonance has nothing to split."""
        resonances, _ = find_resonances(barrier.coins)

        with pytest.raises(DomainError):
            splitting_report(barrier.coins, resonances[0], 0.0)


class TestSymmetry:
    """Test the rotation, gauge and conjugation symmetries."""

    def test_should_require_gauge_support(self, barrier):
        """Test that barriers at 0 and 5 fail the 2ℤ condition."""
        with pytest.raises(GaugeConditionError) as excinfo:
            check_gauge_condition(barrier.coins, 2)

        assert excinfo.value.sites == [5]
        check_gauge_condition(barrier.coins, 5)

    def test_should_be_invariant_under_rotations(self, barrier):
        """Test Res = −Res and Res = e^{iπ/5}Res for barriers on 5ℤ."""
        resonances, _ = find_resonances(barrier.coins)

        assert rotation_defect(resonances, 1, 1) <= 1e-8
        assert rotation_defect(resonances, 1, 5) <= 1e-8
        assert conjugation_defect(resonances) <= 1e-8

    def test_should_gauge_resonant_state(self, barrier):
        """Test that G_lφ_λ is a resonant state of e^{ilπ/k}λ."""
        resonances, _ = find_resonances(barrier.coins)
        state = resonant_state(barrier.coins, resonances[0])
        window = IntervalZ(-3, 8)

        result = gauge_transform(barrier.coins, state, 2, 5, window)

        assert result.lam == pytest.approx(np.exp(2j * np.pi / 5) * state.lam)
        assert eigen_residual(barrier.coins, result.lam, result.state) <= 1e-9

    def test_should_conjugate_resonant_state(self, barrier):
        """Test that conj φ_λ is a resonant state of λ̄ for real coins."""
        resonances, _ = find_resonances(barrier.coins)
        state = resonant_state(barrier.coins, resonances[0])

        lam, conj = conjugate_state(state, IntervalZ(-3, 8))

        assert eigen_residual(barrier.coins, lam, conj) <= 1e-9

    def test_should_refuse_conjugation_for_complex_coins(self, rng):
        """Test that non-real coins have no conjugation symmetry."""
        coins = random_walk(3, rng)
        resonances, _ = find_resonances(coins)
        state = resonant_state(coins, resonances[0])

        with pytest.raises(DomainError):
            conjugate_state(state, IntervalZ(-2, 4))
