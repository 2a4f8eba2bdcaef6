"""
Position distributions μ_n and the heatmap frame of a trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
import pandas as pd

from tools.errors import DomainError
from walk.coins import CoinSequence
from walk.evolution import evolve, trajectory
from walk.states import WalkState

UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class Distribution:
    """
    μ_n(x) = ‖Uⁿψ(x)‖² / ‖ψ‖².

    Attributes:
        n: Time
        mu: Probabilities indexed by site
        total: μ_n(ℤ), 1 up to rounding
    """

    n: int
    mu: pd.Series
    total: float

    def mass(self, sites: Iterable[int]) -> float:
        """μ_n(A) for a set of sites A."""
        return float(self.mu.reindex(list(sites), fill_value=0.0).sum())

    def at(self, x: int) -> float:
        return float(self.mu.get(x, 0.0))

    def velocity_moments(self) -> tuple[float, float]:
        """Mean and second moment of X_n/n (n ≥ 1)."""
        if self.n == 0:
            raise DomainError("X_n/n is undefined at n = 0")
        v = self.mu.index.to_numpy(dtype=float) / self.n
        p = self.mu.to_numpy()
        return float(np.sum(v * p)), float(np.sum(v * v * p))


def distribution_of(state: WalkState, norm_sq: float, n: int) -> Distribution:
    """Distribution of an already evolved state, normalized by the initial ‖ψ‖²."""
    sites = np.arange(state.lo, state.hi + 1)
    mu = pd.Series(state.site_norms_sq() / norm_sq, index=sites, name="mu")
    mu.index.name = "x"
    return Distribution(n, mu, float(mu.sum()))


def distribution(coins: CoinSequence, psi: WalkState, n: int) -> Distribution:
    """
    μ_n for the walk started from ψ.

    Raises:
        DomainError: If ψ = 0 or n < 0
    """
    norm_sq = psi.norm_sq()
    if norm_sq == 0.0:
        raise DomainError("distribution needs a nonzero initial state")
    dist = distribution_of(evolve(coins, psi, n), norm_sq, n)
    if abs(dist.total - 1.0) > UNITARITY_TOL:
        raise DomainError(f"probability not conserved at n={n}: total {dist.total:.12f}")
    return dist


def heatmap_frame(coins: CoinSequence, psi: WalkState, n_max: int) -> pd.DataFrame:
    """
    Long-format frame with columns ``x, n, amp`` where amp = ‖Uⁿψ(x)‖.

    Every n in 0..n_max covers the full window N_n(initial window).
    """
    frames = []
    for n, state in enumerate(trajectory(coins, psi, n_max)):
        frames.append(
            pd.DataFrame(
                {
                    "x": np.arange(state.lo, state.hi + 1),
                    "n": n,
                    "amp": np.sqrt(state.site_norms_sq()),
                }
            )
        )
    return pd.concat(frames, ignore_index=True)
