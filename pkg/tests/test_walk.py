"""Tests for coins, states, evolution and the walk/state JSON formats."""

import json

import numpy as np
import pytest

from tools.errors import DomainError
from walk.coins import Coin, CoinSequence, InadmissibleCoinError
from walk.evolution import apply_U, evolve, trajectory
from walk.io import (
    WalkSpecError,
    load_state,
    load_walk,
    state_from_dict,
    state_to_dict,
    walk_from_dict,
    walk_to_dict,
)
from walk.states import IntervalError, IntervalZ, WalkState, incoming_support, psi_left, psi_right


class TestCoins:
    """Test coin construction and admissibility."""

    def test_should_build_rotation_coin(self):
        """Test that the rotation coin has the documented entries."""
        coin = Coin.rotation(0.6)

        assert coin.c11 == pytest.approx(0.8)
        assert coin.c12 == pytest.approx(0.6)
        assert coin.c21 == pytest.approx(-0.6)
        assert coin.det == pytest.approx(1.0)
        assert coin.is_real

    def test_should_reject_vanishing_diagonal(self):
        """Test that a swap coin violates admissibility."""
        with pytest.raises(InadmissibleCoinError, match="admissibility"):
            Coin(np.array([[0, 1], [1, 0]]))

    def test_should_reject_non_unitary_matrix(self):
        """Test that a non-unitary matrix is refused."""
        with pytest.raises(InadmissibleCoinError, match="unitary"):
            Coin(np.array([[1, 0.1], [0, 1]]))

    def test_should_reject_rotation_amplitude_one(self):
        """Test that r = 1 (reflecting barrier) is refused."""
        with pytest.raises(InadmissibleCoinError):
            Coin.rotation(1.0)

    def test_should_accept_negative_rotation_amplitude(self):
        """Test that a negative r gives an admissible coin with the mirrored entries."""
        coin = Coin.rotation(-0.5)

        assert coin.c12 == pytest.approx(-0.5)
        assert coin.c21 == pytest.approx(0.5)
        assert coin.c11 == pytest.approx(np.sqrt(0.75))
        with pytest.raises(InadmissibleCoinError):
            Coin.rotation(-1.0)

    def test_should_draw_admissible_random_coins(self, rng):
        """Test that random coins are unitary with |c11| >= 0.1."""
        for _ in range(20):
            coin = Coin.random(rng)
            assert abs(coin.c11) >= 0.1
            assert np.allclose(coin.matrix.conj().T @ coin.matrix, np.eye(2))


class TestCoinSequence:
    """Test finitely supported coin sequences."""

    def test_should_drop_identity_coins(self):
        """Test that identity coins do not count toward the support."""
        coins = CoinSequence({0: Coin.rotation(0.3), 3: Coin.rotation(0.0), 5: Coin.diagonal(0.2)})

        assert coins.support == (0, 5)
        assert coins.chs == IntervalZ(0, 5)
        assert coins.k == 6

    def test_should_report_free_walk(self):
        """Test that the free walk has an empty convex hull."""
        coins = CoinSequence.free()

        assert coins.is_free
        assert coins.chs.is_empty
        assert coins.k == 0

    def test_should_tag_inadmissible_matrix_with_site(self):
        """Test that from_matrices reports the offending site."""
        with pytest.raises(InadmissibleCoinError) as excinfo:
            CoinSequence.from_matrices({4: np.array([[0, 1], [1, 0]])})

        assert excinfo.value.site == 4

    def test_should_replace_single_coin(self, barrier):
        """Test that with_coin leaves the other sites untouched."""
        replaced = barrier.coins.with_coin(5, Coin.diagonal(0.4))

        assert replaced.coin_at(0) == barrier.coins.coin_at(0)
        assert replaced.coin_at(5) == Coin.diagonal(0.4)


class TestIntervals:
    """Test integer intervals."""

    def test_should_parse_interval(self):
        """Test parsing of 'a,b'."""
        interval = IntervalZ.parse("-1, 6")

        assert interval == IntervalZ(-1, 6)
        assert interval.size == 8

    @pytest.mark.parametrize("text", ["3", "a,b", "5,2"])
    def test_should_reject_malformed_interval(self, text):
        """Test that malformed interval text raises."""
        with pytest.raises(IntervalError):
            IntervalZ.parse(text)

    def test_should_combine_intervals(self):
        """Test neighborhood, hull and intersection."""
        a, b = IntervalZ(0, 3), IntervalZ(2, 7)

        assert a.neighborhood(2) == IntervalZ(-2, 5)
        assert a.hull(b) == IntervalZ(0, 7)
        assert a.intersect(b) == IntervalZ(2, 3)
        assert a.intersect(IntervalZ(5, 6)).is_empty
        assert a.contains_interval(IntervalZ(1, 2))


class TestWalkState:
    """Test finitely supported states."""

    def test_should_restrict_and_embed(self):
        """Test that restriction zero-fills and embedding checks the support."""
        psi = WalkState.from_sites({0: (1, 0), 4: (0, 2j)})

        restricted = psi.restrict(IntervalZ(-1, 2))

        assert restricted.window == IntervalZ(-1, 2)
        assert restricted.norm_sq() == pytest.approx(1.0)
        with pytest.raises(IntervalError):
            psi.embed(IntervalZ(0, 3))

    def test_should_compute_support_and_norm(self):
        """Test support trimming and the l2 norm."""
        psi = WalkState(-2, np.array([[0, 0], [3, 0], [0, 4j], [0, 0]]))

        assert psi.support() == IntervalZ(-1, 0)
        assert psi.norm() == pytest.approx(5.0)

    def test_should_refuse_normalizing_zero_state(self):
        """Test that the zero state cannot be normalized."""
        with pytest.raises(DomainError):
            WalkState.zeros(IntervalZ(0, 2)).normalized()

    def test_should_build_far_field_generators(self):
        """Test Ψ_L(λ,x) = (λ^x, 0) and Ψ_R(λ,x) = (0, λ^{-x})."""
        window = IntervalZ(1, 3)

        left = psi_left(0.5, window)
        right = psi_right(0.5, window)

        assert np.allclose(left.left, [0.5, 0.25, 0.125])
        assert np.allclose(right.right, [2.0, 4.0, 8.0])

    def test_should_compute_incoming_support(self):
        """Test supp♭ψ = [inf supp ψ^R, sup supp ψ^L]."""
        psi = WalkState.from_sites({0: (0, 1), 2: (1, 0), 5: (0, 1)})

        assert incoming_support(psi) == IntervalZ(0, 2)


class TestEvolution:
    """Test the exact evolution U."""

    def test_should_shift_free_components(self):
        """Test that on the free walk L moves left and R moves right."""
        psi = WalkState.from_sites({0: (1, 2)})

        state = evolve(CoinSequence.free(), psi, 3)

        assert state.at(-3)[0] == pytest.approx(1.0)
        assert state.at(3)[1] == pytest.approx(2.0)
        assert state.norm_sq() == pytest.approx(5.0)

    def test_should_read_only_neighbouring_sites(self, rng):
        """Test that (Uψ)(x) only sees ψ(x±1) and the coins at x±1."""
        coins = CoinSequence({x: Coin.random(rng) for x in range(-3, 4)})
        values = rng.standard_normal((9, 2)) + 1j * rng.standard_normal((9, 2))
        psi = WalkState.from_sites({x: tuple(values[x + 4]) for x in range(-4, 5)})
        full = apply_U(coins, psi)

        for x in range(-3, 4):
            masked = WalkState.from_sites({y: tuple(psi.at(y)) for y in (x - 1, x + 1)})
            local = CoinSequence({y: coins.coin_at(y) for y in (x - 1, x + 1) if -3 <= y <= 3})

            assert np.allclose(apply_U(coins, masked).at(x), full.at(x), atol=1e-12)
            assert np.allclose(apply_U(local, masked).at(x), full.at(x), atol=1e-12)

    def test_should_apply_coin_before_shift(self):
        """Test (Uψ)^L(x) = [C(x+1)ψ(x+1)]_L and (Uψ)^R(x) = [C(x−1)ψ(x−1)]_R."""
        coins = CoinSequence({0: Coin.rotation(0.6)})
        psi = WalkState.from_sites({0: (1, 0)})

        state = apply_U(coins, psi)

        assert state.window == IntervalZ(-1, 1)
        assert state.at(-1)[0] == pytest.approx(0.8)
        assert state.at(1)[1] == pytest.approx(-0.6)

    def test_should_conserve_norm(self, rng):
        """Test unitarity of U on a random walk."""
        coins = CoinSequence({x: Coin.random(rng) for x in range(6)})
        psi = WalkState.from_sites({2: (0.3 + 0.1j, -0.7), 3: (0.2, 0.5j)})

        norms = [s.norm_sq() for s in trajectory(coins, psi, 80)]

        assert np.allclose(norms, psi.norm_sq(), atol=1e-12)

    def test_should_yield_all_intermediate_states(self, single_coin, localized_state):
        """Test that trajectory yields ψ_0..ψ_n."""
        states = list(trajectory(single_coin, localized_state, 4))

        assert len(states) == 5
        assert states[0] is localized_state
        assert states[4].window == IntervalZ(-4, 4)

    def test_should_reject_negative_time(self, single_coin, localized_state):
        """Test that negative step counts raise."""
        with pytest.raises(DomainError):
            evolve(single_coin, localized_state, -1)


class TestWalkIO:
    """Test the JSON walk and state formats."""

    def test_should_round_trip_walk(self, barrier, tmp_path):
        """Test that a written walk re-reads to the same coins."""
        path = tmp_path / "walk.json"
        path.write_text(json.dumps(walk_to_dict(barrier.coins)))

        coins = load_walk(path)

        assert coins.support == barrier.coins.support
        for x in coins.support:
            assert np.array_equal(coins.coin_at(x).matrix, barrier.coins.coin_at(x).matrix)

    def test_should_round_trip_state(self, tmp_path):
        """Test that a written state re-reads to the same amplitudes."""
        psi = WalkState.from_sites({-1: (0.25 - 1j, 0), 2: (0, 1e-3j)})
        path = tmp_path / "state.json"
        path.write_text(json.dumps(state_to_dict(psi)))

        assert load_state(path).max_abs_diff(psi) == 0.0

    def test_should_expand_rotation_shorthand(self):
        """Test that {"rotation": r} builds the rotation coin."""
        coins = walk_from_dict({"coins": [{"x": 5, "rotation": 0.6}]})

        assert coins.coin_at(5) == Coin.rotation(0.6)

    def test_should_report_malformed_entry_location(self):
        """Test that errors name the offending JSON entry."""
        with pytest.raises(WalkSpecError, match=r"coins\[1\]"):
            walk_from_dict({"coins": [{"x": 0, "rotation": 0.5}, {"x": 1}]})

    def test_should_report_inadmissible_coin_in_spec(self):
        """Test that inadmissible coins are rejected with their site."""
        with pytest.raises(InadmissibleCoinError, match="x=2"):
            walk_from_dict({"coins": [{"x": 2, "matrix": [[0, 1], [1, 0]]}]})

    def test_should_reject_empty_state(self):
        """Test that a state without amplitudes is refused."""
        with pytest.raises(WalkSpecError):
            state_from_dict({"amplitudes": []})
