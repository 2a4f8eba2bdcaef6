"""Shared walks and states for the test suite."""

import numpy as np
import pytest

from gallery.models import double_barrier, triple_barrier
from walk.coins import Coin, CoinSequence
from walk.states import IntervalZ, WalkState


@pytest.fixture
def rng():
    """Deterministic generator for random coins."""
    return np.random.default_rng(12345)


@pytest.fixture
def barrier():
    """Double barrier with k=5, r=2^{-1/2}."""
    return double_barrier(5, 2**-0.5)


@pytest.fixture
def barrier_setup(barrier):
    """(walk, ψ with ψ(1)=(0,1), J=[-1,6])."""
    return barrier.coins, barrier.initial_state(), IntervalZ(-1, 6)


@pytest.fixture
def triple():
    """Triple barrier on the double-root family."""
    return triple_barrier(0.75, 12 / 13, 1 / 3)


@pytest.fixture
def single_coin():
    """A single rotation coin at the origin."""
    return CoinSequence({0: Coin.rotation(0.5)})


@pytest.fixture
def localized_state():
    """ψ = δ_0 ⊗ (1, 1)/√2."""
    return WalkState.from_sites({0: (2**-0.5, 2**-0.5)})
