"""Exact time evolution U = SC on finite windows."""

from typing import Iterator

import numpy as np

from tools.errors import DomainError
from walk.coins import CoinSequence
from walk.states import WalkState


def apply_U(coins: CoinSequence, psi: WalkState) -> WalkState:
    """
    Apply one step of the walk.

    (Uψ)^L(x) = [C(x+1)ψ(x+1)]_L and (Uψ)^R(x) = [C(x−1)ψ(x−1)]_R, so the
    window grows by exactly one site on each side.

    Args:
        coins: Coin sequence
        psi: Current state

    Returns:
        Uψ over [lo−1, hi+1]
    """
    n = psi.amplitudes.shape[0]
    coined = np.einsum("xij,xj->xi", coins.matrices(psi.window), psi.amplitudes)
    out = np.zeros((n + 2, 2), dtype=np.complex128)
    out[:n, 0] = coined[:, 0]
    out[2:, 1] = coined[:, 1]
    return WalkState(psi.lo - 1, out)


def trajectory(coins: CoinSequence, psi: WalkState, n: int) -> Iterator[WalkState]:
    """Yield ψ, Uψ, ..., Uⁿψ."""
    if n < 0:
        raise DomainError(f"number of steps must be non-negative, got {n}")
    current = psi
    yield current
    for _ in range(n):
        current = apply_U(coins, current)
        yield current


def evolve(coins: CoinSequence, psi: WalkState, n: int) -> WalkState:
    """
    Return Uⁿψ; the window after n steps is N_n of the initial window.

    Raises:
        DomainError: If n is negative
    """
    current = psi
    for current in trajectory(coins, psi, n):
        pass
    return current
