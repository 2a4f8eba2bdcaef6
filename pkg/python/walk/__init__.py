"""Coins, states and the exact walk evolution."""

from walk.coins import IDENTITY_COIN, Coin, CoinSequence, InadmissibleCoinError
from walk.evolution import apply_U, evolve, trajectory
from walk.states import (
    IntervalError,
    IntervalZ,
    WalkState,
    incoming_support,
    psi_left,
    psi_right,
    q_transform,
)

__all__ = [
    "IDENTITY_COIN",
    "Coin",
    "CoinSequence",
    "InadmissibleCoinError",
    "IntervalError",
    "IntervalZ",
    "WalkState",
    "apply_U",
    "evolve",
    "incoming_support",
    "psi_left",
    "psi_right",
    "q_transform",
    "trajectory",
]
