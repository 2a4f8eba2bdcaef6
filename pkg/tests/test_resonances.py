"""Tests for root finding, resonances, the cut-off oracle and resonant states."""

import numpy as np
import pytest

from gallery.models import random_walk
from resonances.cutoff import OracleSizeError, cutoff_matrix, eigen_oracle, faddeev_leverrier
from resonances.roots import (
    aberth_roots,
    cluster_roots,
    multiset_distance,
    polynomial_roots,
    strip_polynomial,
    taylor_coefficients,
)
from resonances.solver import ResonanceKind, find_resonances, incoming_resonances
from resonances.states import (
    NotAResonanceError,
    default_window,
    eigen_residual,
    incoming_state,
    jordan_chain,
    resonant_state,
)
from tools.errors import DomainError
from walk.coins import CoinSequence
from walk.evolution import apply_U, evolve
from walk.states import IntervalError, IntervalZ


def _pairs(resonances):
    return [(r.lam, r.multiplicity) for r in resonances]


class TestRoots:
    """Test the polynomial root utilities."""

    def test_should_find_simple_roots(self):
        """Test Aberth iteration on (λ−1)(λ−2)(λ+0.5i)."""
        expected = np.array([1.0, 2.0, -0.5j])
        coeffs = np.polynomial.polynomial.polyfromroots(expected)

        roots = aberth_roots(coeffs)

        assert multiset_distance([(r, 1) for r in roots], [(r, 1) for r in expected]) <= 1e-12

    def test_should_factor_out_zero_roots(self):
        """Test that λ²(λ − 3) gives one nonzero root and zero multiplicity 2."""
        roots, zero_count = polynomial_roots([0.0, 0.0, -3.0, 1.0])

        assert zero_count == 2
        assert roots == pytest.approx([3.0])

    def test_should_strip_negligible_top_coefficients(self):
        """Test that rounding-level leading coefficients are dropped."""
        core, zero_count = strip_polynomial([0.0, 2.0, 1.0, 1e-20])

        assert zero_count == 1
        assert np.allclose(core, [2.0, 1.0])

    def test_should_reject_zero_polynomial(self):
        """Test that the zero polynomial has no roots to find."""
        with pytest.raises(DomainError):
            strip_polynomial([0.0, 0.0])

    def test_should_cluster_nearby_roots(self):
        """Test that roots closer than the tolerance are merged."""
        clusters = cluster_roots([1.0, 1.0 + 1e-9, 2.0])

        assert sorted(c.size for c in clusters) == [1, 2]

    def test_should_chain_clusters_by_single_linkage(self):
        """Test that a chain of close roots forms one cluster and order follows first members."""
        clusters = cluster_roots([3.0, 1.0, 1.0 + 6e-7, 1.0 + 1.2e-6], tol=1e-6)

        assert [c.size for c in clusters] == [1, 3]
        assert clusters[0][0] == 3.0
        assert cluster_roots([]) == []
        assert [c.size for c in cluster_roots([2j])] == [1]

    def test_should_compute_taylor_coefficients(self):
        """Test f^{(j)}(λ)/j! for f = λ³ at λ = 2."""
        coefficients = taylor_coefficients([0, 0, 0, 1], 2.0, 3)

        assert np.allclose(coefficients, [8.0, 12.0, 6.0, 1.0])

    def test_should_treat_different_sizes_as_far_apart(self):
        """Test that multisets of different total multiplicity are infinitely far."""
        assert multiset_distance([(1.0, 2)], [(1.0, 1)]) == float("inf")
        assert multiset_distance([], []) == 0.0


class TestFindResonances:
    """Test the σ-root resonance solver."""

    def test_should_reproduce_double_barrier_spectrum(self, barrier):
        """Test the 2k simple resonances r^{1/k}e^{iπ(2j−1)/2k}."""
        resonances, summary = find_resonances(barrier.coins)

        assert len(resonances) == 10
        assert all(r.multiplicity == 1 for r in resonances)
        expected = [(lam, 1) for lam in barrier.resonances]
        assert multiset_distance(_pairs(resonances), expected) <= 1e-8
        assert summary.lambda0 == pytest.approx(barrier.lambda0)
        assert summary.m0 == 1
        assert summary.sum_mult == summary.budget == 10

    def test_should_find_no_resonance_for_single_coin(self, single_coin):
        """Test that a single perturbed site has no nonzero resonance."""
        resonances, summary = find_resonances(single_coin)

        assert resonances == []
        assert summary.sum_mult == 0
        assert summary.budget == 0

    def test_should_find_no_resonance_for_free_walk(self):
        """Test the free walk."""
        resonances, _ = find_resonances(CoinSequence.free())

        assert resonances == []

    def test_should_detect_double_resonances(self, triple):
        """Test the triple barrier on the double-root family."""
        resonances, summary = find_resonances(triple.coins)

        assert [r.multiplicity for r in resonances] == [2, 2]
        expected = [(1j / np.sqrt(2), 2), (-1j / np.sqrt(2), 2)]
        assert multiset_distance(_pairs(resonances), expected) <= 1e-6
        assert summary.m0 == 2
        assert summary.p_of(1 / np.sqrt(2)) == 2

    def test_should_stay_inside_unit_disk(self, rng):
        """Test |λ| < 1 and the multiplicity budget on random walks."""
        for k in (2, 3, 5):
            resonances, summary = find_resonances(random_walk(k, rng))
            assert all(r.modulus < 1.0 for r in resonances)
            assert summary.sum_mult <= summary.budget

    def test_should_reflect_incoming_resonances(self, barrier):
        """Test that incoming resonances are 1/λ̄ when c11 = c22."""
        outgoing, _ = find_resonances(barrier.coins)

        incoming = incoming_resonances(barrier.coins)

        reflected = [(1 / r.lam.conjugate(), r.multiplicity) for r in outgoing]
        assert multiset_distance(_pairs(incoming), reflected) <= 1e-6
        assert all(r.kind is ResonanceKind.INCOMING for r in incoming)

    def test_should_serialize_resonance(self, barrier):
        """Test the JSON shape of a resonance."""
        resonances, _ = find_resonances(barrier.coins)

        entry = resonances[0].to_dict()

        assert set(entry) == {"re", "im", "mult", "residual", "kind"}
        assert entry["mult"] == 1


class TestCutoffOracle:
    """Test the cut-off matrix E_J and its eigenvalue oracle."""

    def test_should_build_cutoff_of_size_twice_interval(self, barrier):
        """Test that E_J acts on 2|J| amplitudes and contracts norms."""
        cutoff = cutoff_matrix(barrier.coins, IntervalZ(-1, 6))

        assert cutoff.size == 16
        assert np.linalg.norm(cutoff.matrix, 2) <= 1.0 + 1e-12

    def test_should_lay_out_triple_barrier_cutoff(self, triple):
        """Test E_J on J = [−1, 1] entry by entry and its characteristic polynomial λ²(λ²+½)²."""
        coins = triple.coins
        c = {x: coins.matrix_at(x) for x in (-1, 0, 1)}
        expected = np.zeros((6, 6), dtype=np.complex128)
        expected[0, 2:4] = c[0][0, 0], c[0][0, 1]
        expected[2, 4:6] = c[1][0, 0], c[1][0, 1]
        expected[3, 0:2] = c[-1][1, 0], c[-1][1, 1]
        expected[5, 2:4] = c[0][1, 0], c[0][1, 1]

        cutoff = cutoff_matrix(coins, IntervalZ(-1, 1))

        assert np.array_equal(cutoff.matrix, expected)
        assert np.allclose(faddeev_leverrier(cutoff.matrix), [0, 0, 0.25, 0, 1, 0, 1])

    def test_should_require_interval_containing_hull(self, barrier):
        """Test that J must contain chs."""
        with pytest.raises(IntervalError):
            cutoff_matrix(barrier.coins, IntervalZ(1, 6))

    def test_should_compute_characteristic_polynomial(self, rng):
        """Test Faddeev–LeVerrier against numpy."""
        matrix = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))

        coeffs = faddeev_leverrier(matrix)

        assert np.allclose(coeffs[::-1], np.poly(matrix))

    def test_should_agree_with_sigma_roots(self, rng):
        """Test that nonzero eigenvalues of E_J are the resonances."""
        for k in (1, 2, 4, 6):
            coins = random_walk(k, rng)
            resonances, _ = find_resonances(coins)
            pairs = eigen_oracle(cutoff_matrix(coins, coins.chs))
            oracle = [(lam, m) for lam, m in pairs if lam != 0]
            assert multiset_distance(_pairs(resonances), oracle) <= 1e-6

    def test_should_report_zero_eigenvalue_first(self, barrier):
        """Test the zero eigenvalue multiplicity on a widened interval."""
        oracle = eigen_oracle(cutoff_matrix(barrier.coins, IntervalZ(-1, 6)))

        assert oracle[0][0] == 0
        assert oracle[0][1] + sum(m for lam, m in oracle[1:]) == 16

    def test_should_refuse_oversized_matrix(self, single_coin):
        """Test the oracle size cap."""
        cutoff = cutoff_matrix(single_coin, IntervalZ(-100, 100))

        with pytest.raises(OracleSizeError):
            eigen_oracle(cutoff)


class TestResonantStates:
    """Test resonant states and Jordan chains."""

    def test_should_solve_eigen_equation(self, barrier):
        """Test (U−λ)φ_λ = 0 away from the window edge."""
        resonances, _ = find_resonances(barrier.coins)
        for res in resonances:
            state = resonant_state(barrier.coins, res)
            assert state.residual() <= 1e-9

    def test_should_be_outgoing(self, barrier):
        """Test that resonant states are outgoing."""
        resonances, _ = find_resonances(barrier.coins)

        state = resonant_state(barrier.coins, resonances[0])

        assert state.is_outgoing()

    def test_should_match_far_field(self, barrier):
        """Test φ = c₊♯Ψ_R to the right of the hull."""
        resonances, _ = find_resonances(barrier.coins)
        state = resonant_state(barrier.coins, resonances[0])
        lam = state.lam

        values = state.evaluate(IntervalZ(6, 9))

        for x in range(6, 10):
            assert values.at(x)[1] == pytest.approx(state.c_plus * lam ** (-x))
            assert values.at(x)[0] == pytest.approx(0.0)

    def test_should_reject_non_resonance(self, barrier):
        """Test NotAResonanceError away from σ's roots."""
        with pytest.raises(NotAResonanceError):
            resonant_state(barrier.coins, 0.5 + 0.1j)

    def test_should_build_jordan_chain(self, triple):
        """Test (U−λ)φ_k = φ_{k−1} for the double resonances."""
        resonances, _ = find_resonances(triple.coins)
        for res in resonances:
            chain = jordan_chain(triple.coins, res)
            assert chain.length == 2
            assert chain.residuals().max() <= 1e-9
            assert chain.member(0, default_window(triple.coins)).norm() == 0.0

    def test_should_follow_transfer_recursion(self, barrier, rng):
        """Test Qφ(x+1) = T_λ(x)Qφ(x) on the double barrier and a random walk."""
        resonances, _ = find_resonances(barrier.coins)
        for res in resonances:
            assert resonant_state(barrier.coins, res).transfer_residual(IntervalZ(-4, 9)) <= 1e-9

        coins = random_walk(4, rng)
        resonances, _ = find_resonances(coins)
        for res in resonances[:3]:
            state = resonant_state(coins, res)
            assert state.transfer_residual(default_window(coins)) <= 1e-8

    def test_should_evolve_restricted_state_by_lambda(self, barrier):
        """Test Uⁿ𝟙_Jφ_λ = λⁿ𝟙_{N_n(J)}φ_λ amplitude by amplitude."""
        resonances, _ = find_resonances(barrier.coins)
        state = resonant_state(barrier.coins, resonances[0])
        interval = IntervalZ(-1, 6)
        lam = state.lam

        for n in (1, 4, 11):
            direct = evolve(barrier.coins, state.restricted(interval), n)
            expected = state.evaluate(interval.neighborhood(n)).scaled(lam**n)
            wide = interval.neighborhood(n + 1)
            assert direct.max_abs_diff(expected, wide) <= 1e-9 * expected.norm()

    def test_should_commute_cutoff_with_one_step(self, barrier):
        """Test U𝟙_Jφ = 𝟙_{N₁(J)}Uφ for the outgoing φ_λ."""
        resonances, _ = find_resonances(barrier.coins)
        state = resonant_state(barrier.coins, resonances[2])
        interval = IntervalZ(0, 5)

        lhs = apply_U(barrier.coins, state.restricted(interval))
        rhs = apply_U(barrier.coins, state.evaluate(interval.neighborhood(3)))

        expected = rhs.restrict(interval.neighborhood(1))
        assert lhs.max_abs_diff(expected, interval.neighborhood(2)) <= 1e-12 * rhs.norm()

    def test_should_evolve_restricted_chain_member(self, triple):
        """Test Uⁿ𝟙_Jφ_{λ,2} = λⁿ𝟙_{N_n(J)}(φ_{λ,2} + nλ⁻¹φ_{λ,1})."""
        resonances, _ = find_resonances(triple.coins)
        chain = jordan_chain(triple.coins, resonances[0])
        interval = IntervalZ(-1, 1)
        lam = chain.lam

        for n in (1, 3, 6):
            region = interval.neighborhood(n)
            head, second = chain.member(1, region), chain.member(2, region)
            expected = (second + head.scaled(n / lam)).scaled(lam**n)
            direct = evolve(triple.coins, chain.member(2, interval), n)
            error = direct.max_abs_diff(expected, interval.neighborhood(n + 1))
            assert error <= 1e-8 * expected.norm()

    def test_should_head_chain_with_resonant_state(self, triple):
        """Test that φ_{λ,1} is a constant multiple of φ_λ."""
        resonances, _ = find_resonances(triple.coins)
        window = default_window(triple.coins)
        for res in resonances:
            head = jordan_chain(triple.coins, res).member(1, window).vector()
            state = resonant_state(triple.coins, res).evaluate(window).vector()
            pivot = int(np.argmax(np.abs(state)))
            ratio = head[pivot] / state[pivot]

            assert np.allclose(head, ratio * state, atol=1e-10 * np.abs(head).max())

    def test_should_build_incoming_state(self, barrier):
        """Test that S·P·conj(φ_λ) solves the eigen equation at 1/λ̄."""
        resonances, _ = find_resonances(barrier.coins)
        state = resonant_state(barrier.coins, resonances[0])
        window = IntervalZ(-4, 9)

        incoming = incoming_state(state, window)

        assert eigen_residual(barrier.coins, 1 / state.lam.conjugate(), incoming) <= 1e-9

    def test_should_refuse_incoming_state_without_symmetry(self, rng):
        """Test that c11 ≠ c22 walks are refused."""
        coins = random_walk(2, rng)
        resonances, _ = find_resonances(coins)
        state = resonant_state(coins, resonances[0])

        with pytest.raises(DomainError):
            incoming_state(state, IntervalZ(-3, 4))
