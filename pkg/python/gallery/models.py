"""
Named walks with closed-form ground truth.

* double barrier: rotation coins at 0 and k, resonances the 2k roots of
  λ^{2k} = α with α = c₂₁(0)c₁₂(k)∏_{0<x<k} det C(x);
* triple barrier: rotation coins at −1, 0, 1 with a quartic resonance equation
  that has double roots on a one-parameter family;
* seeded random admissible walks, optionally with c₁₂ supported on kℤ.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from numpy.typing import NDArray

from tools.errors import DomainError
from walk.coins import Coin, CoinSequence
from walk.states import IntervalZ, WalkState

DOUBLE_ROOT_TOL = 1e-9


def _check_amplitude(name: str, r: float) -> None:
    if not 0.0 < r < 1.0:
        raise DomainError(f"{name}={r} must lie in (0, 1); 0 and 1 are the degenerate walks")


def _barrier_sites(coins: CoinSequence) -> tuple[int, int]:
    """(x⁻, N) for barriers at x⁻ and x⁻ + N with diagonal coins in between."""
    chs = coins.chs
    if chs.size < 2:
        raise DomainError("a double barrier needs two distinct barrier sites")
    for x in range(chs.lo + 1, chs.hi):
        coin = coins.coin_at(x)
        if coin.c12 != 0 or coin.c21 != 0:
            raise DomainError(f"coin at x={x} between the barriers is not diagonal")
    return chs.lo, chs.size - 1


def double_barrier_alpha(coins: CoinSequence) -> complex:
    """
    α = c₂₁(x⁻)c₁₂(x⁺)∏_{x⁻<x<x⁺} det C(x).

    Raises:
        DomainError: If the interior coins are not diagonal
    """
    lo, n = _barrier_sites(coins)
    alpha = coins.coin_at(lo).c21 * coins.coin_at(lo + n).c12
    for x in range(lo + 1, lo + n):
        alpha *= coins.coin_at(x).det
    return complex(alpha)


def double_barrier_amplitudes(
    coins: CoinSequence, count: int
) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """
    The amplitudes a_n, b_n of the walk started from ψ(x⁻+1) = (0, 1).

    Relative to x⁻, Uⁿψ(n+1) = (0, a_n) for 0 ≤ n ≤ N−1 and
    Uⁿψ(2N−1−n) = (b_n, 0) for N ≤ n ≤ 2N−1, where

        a₀ = 1,              a_{n+1} = a_n c₂₂(n+1),
        b_N = a_{N−1}c₁₂(N),  b_{n+1} = b_n c₁₁(2N−1−n).

    Both recursions are continued to n < ``count`` so that the resonant states
    can be evaluated away from the barriers.

    Returns:
        (a, b) with b[n] = 0 for n < N
    """
    lo, n_sites = _barrier_sites(coins)
    a = np.ones(count, dtype=np.complex128)
    for n in range(count - 1):
        a[n + 1] = a[n] * coins.coin_at(lo + n + 1).c22
    b = np.zeros(count, dtype=np.complex128)
    if count > n_sites:
        b[n_sites] = a[n_sites - 1] * coins.coin_at(lo + n_sites).c12
        for n in range(n_sites, count - 1):
            b[n + 1] = b[n] * coins.coin_at(lo + 2 * n_sites - 1 - n).c11
    return a, b


def double_barrier_state(coins: CoinSequence, lam: complex, window: IntervalZ) -> WalkState:
    """
    Closed-form resonant state for λ^{2N} = α,

        φ(x) = (𝟙_{x≤N−1} λ^{x−2N} b_{2N−1−x}, 𝟙_{x≥1} λ^{−x} a_{x−1})

    in coordinates relative to x⁻.
    """
    lo, n_sites = _barrier_sites(coins)
    span = max(window.hi - lo, 2 * n_sites - 1 - (window.lo - lo)) + 2
    a, b = double_barrier_amplitudes(coins, max(span, 2 * n_sites + 1))
    amps = np.zeros((window.size, 2), dtype=np.complex128)
    for i, x in enumerate(window.sites()):
        y = x - lo
        if y <= n_sites - 1:
            amps[i, 0] = lam ** (y - 2 * n_sites) * b[2 * n_sites - 1 - y]
        if y >= 1:
            amps[i, 1] = lam ** (-y) * a[y - 1]
    return WalkState(window.lo, amps)


@dataclass(frozen=True)
class DoubleBarrier:
    """
    Rotation barriers C_r at 0 and k.

    Attributes:
        k: Barrier distance N
        r: Reflection amplitude
        coins: The walk
        alpha: −r²
        resonances: r^{1/k}e^{iπ(2j−1)/2k}, j = 1..2k, all simple
    """

    k: int
    r: float
    coins: CoinSequence
    alpha: complex
    resonances: NDArray[np.complex128]

    @property
    def lambda0(self) -> float:
        return float(self.r ** (1.0 / self.k))

    def state(self, j: int, window: IntervalZ) -> WalkState:
        """Closed-form resonant state of λ_j."""
        return double_barrier_state(self.coins, complex(self.resonances[j - 1]), window)

    def initial_state(self) -> WalkState:
        """ψ(1) = (0, 1)."""
        return WalkState.from_sites({1: (0.0, 1.0)})


def double_barrier(k: int, r: float, interior: Sequence[float] | None = None) -> DoubleBarrier:
    """
    The double-barrier walk.

    Args:
        k: Distance between the barriers, k ≥ 1
        r: Reflection amplitude in (0, 1)
        interior: Optional phases a, one per interior site 1..k−1, placing
            diag(e^{ia}, e^{−ia}) between the barriers

    Raises:
        DomainError: If k < 1, r ∉ (0, 1) or ``interior`` has the wrong length
    """
    if k < 1:
        raise DomainError(f"barrier distance must be >= 1, got {k}")
    _check_amplitude("r", r)
    barrier = Coin.rotation(r)
    coins: dict[int, Coin] = {0: barrier, k: barrier}
    if interior is not None:
        if len(interior) != k - 1:
            raise DomainError(f"need {k - 1} interior phases, got {len(interior)}")
        for x, phase in enumerate(interior, start=1):
            coins[x] = Coin.diagonal(phase)
    walk = CoinSequence(coins)
    alpha = double_barrier_alpha(walk)
    j = np.arange(1, 2 * k + 1)
    if interior is None:
        lams = r ** (1.0 / k) * np.exp(1j * np.pi * (2 * j - 1) / (2 * k))
    else:
        angles = (np.angle(alpha) + 2 * np.pi * (j - 1)) / (2 * k)
        lams = abs(alpha) ** (1.0 / (2 * k)) * np.exp(1j * angles)
    return DoubleBarrier(k, r, walk, alpha, lams.astype(np.complex128))


@dataclass(frozen=True)
class TripleBarrier:
    """
    Rotation barriers at −1, 0, 1.

    Attributes:
        radii: (r₋₁, r₀, r₁)
        coins: The walk
        quartic: Ascending coefficients of
            λ⁴ − (c₂₁(0)c₁₂(1) + c₂₁(−1)c₁₂(0))λ² − c₂₁(−1)c₁₂(1)·det C(0)
        multiplicity_two: r₀ = 2√(r₋₁r₁)/(r₋₁+r₁) with r₋₁ ≠ r₁, where the
            quartic has two double roots
    """

    radii: tuple[float, float, float]
    coins: CoinSequence
    quartic: NDArray[np.complex128]
    multiplicity_two: bool

    def roots(self) -> NDArray[np.complex128]:
        return npoly.polyroots(self.quartic)


def triple_barrier(r_minus: float, r0: float, r_plus: float) -> TripleBarrier:
    """
    Raises:
        DomainError: If a parameter is outside (0, 1)
    """
    for name, value in (("r_minus", r_minus), ("r0", r0), ("r_plus", r_plus)):
        _check_amplitude(name, value)
    coins = CoinSequence(
        {-1: Coin.rotation(r_minus), 0: Coin.rotation(r0), 1: Coin.rotation(r_plus)}
    )
    c = coins.coin_at
    middle = c(0).c21 * c(1).c12 + c(-1).c21 * c(0).c12
    constant = -c(-1).c21 * c(1).c12 * c(0).det
    quartic = np.array([constant, 0.0, -middle, 0.0, 1.0], dtype=np.complex128)
    critical = 2.0 * np.sqrt(r_minus * r_plus) / (r_minus + r_plus)
    flag = abs(r0 - critical) <= DOUBLE_ROOT_TOL and abs(r_minus - r_plus) > DOUBLE_ROOT_TOL
    return TripleBarrier((r_minus, r0, r_plus), coins, quartic, bool(flag))


def random_walk(k: int, rng: np.random.Generator) -> CoinSequence:
    """
    Haar-random admissible coins on [0, k−1].

    Raises:
        DomainError: If k < 1
    """
    if k < 1:
        raise DomainError(f"random walk needs k >= 1 sites, got {k}")
    return CoinSequence({x: Coin.random(rng) for x in range(k)})


def random_kz_walk(k: int, blocks: int, rng: np.random.Generator) -> CoinSequence:
    """
    Random walk on [0, k·blocks] whose off-diagonal entries sit on kℤ.

    Multiples of k carry Haar-random coins, every other site a random diagonal coin.
    """
    if k < 1 or blocks < 1:
        raise DomainError(f"need k >= 1 and blocks >= 1, got k={k}, blocks={blocks}")
    coins: dict[int, Coin] = {}
    for x in range(k * blocks + 1):
        if x % k == 0:
            coins[x] = Coin.random(rng)
        else:
            alpha, beta = rng.uniform(0.0, 2.0 * np.pi, size=2)
            coins[x] = Coin.diagonal(float(alpha), float(beta))
    return CoinSequence(coins)
