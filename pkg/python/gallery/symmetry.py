"""
Symmetries of the resonance set.

* If c₁₂ (and so c₂₁) vanishes off kℤ, the gauge G_l = diag(e^{ilπx/k}, e^{−ilπx/k})
  satisfies UG_l = e^{ilπ/k}G_lU, so G_l maps resonant states of λ to
  resonant states of e^{ilπ/k}λ and m(e^{ilπ/k}λ) = m(λ).
* Real coins commute with complex conjugation, so conj(φ_λ) is a resonant
  state of λ̄.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from resonances.roots import multiset_distance
from resonances.solver import Resonance
from resonances.states import ResonantState
from tools.errors import DomainError
from walk.coins import CoinSequence
from walk.states import IntervalZ, WalkState


class GaugeConditionError(DomainError):
    """Some off-diagonal coin entry sits outside kℤ."""

    def __init__(self, k: int, sites: list[int]):
        super().__init__(f"c12 must vanish off {k}Z; nonzero at x={sites}")
        self.k = k
        self.sites = sites


@dataclass(frozen=True)
class GaugeResult:
    """
    Attributes:
        omega: e^{ilπ/k}
        state: G_lψ
        lam: ωλ when ψ was a resonant state of λ, else None
    """

    omega: complex
    state: WalkState
    lam: complex | None = None


def check_gauge_condition(coins: CoinSequence, k: int) -> None:
    """
    Raises:
        GaugeConditionError: If c₁₂(x) ≠ 0 for some x ∉ kℤ
    """
    if k < 1:
        raise DomainError(f"gauge period must be >= 1, got {k}")
    bad = [x for x, coin in coins if x % k != 0 and (coin.c12 != 0 or coin.c21 != 0)]
    if bad:
        raise GaugeConditionError(k, bad)


def gauge_transform(
    coins: CoinSequence,
    psi: WalkState | ResonantState,
    l: int,
    k: int,
    window: IntervalZ | None = None,
) -> GaugeResult:
    """
    Apply G_l = diag(e^{ilπx/k}, e^{−ilπx/k}) pointwise.

    Args:
        coins: Walk whose c₁₂ is supported on kℤ
        psi: A state, or a resonant state evaluated over ``window``
        l: Integer power of the rotation
        k: Period of the support condition
        window: Evaluation window for resonant states

    Raises:
        GaugeConditionError: If the support condition fails
    """
    check_gauge_condition(coins, k)
    omega = complex(np.exp(1j * np.pi * l / k))
    lam: complex | None = None
    if isinstance(psi, ResonantState):
        lam = omega * psi.lam
        psi = psi.evaluate(window or psi.coins.chs.neighborhood(2))
    x = np.arange(psi.lo, psi.hi + 1)
    phase = np.exp(1j * np.pi * l * x / k)
    amps = psi.amplitudes * np.stack([phase, phase.conj()], axis=1)
    return GaugeResult(omega, WalkState(psi.lo, amps), lam)


def rotated(resonances: list[Resonance], l: int, k: int) -> list[tuple[complex, int]]:
    omega = np.exp(1j * np.pi * l / k)
    return [(complex(omega * r.lam), r.multiplicity) for r in resonances]


def rotation_defect(resonances: list[Resonance], l: int, k: int) -> float:
    """Matching distance between Res and e^{ilπ/k}Res, multiplicities included."""
    original = [(r.lam, r.multiplicity) for r in resonances]
    return multiset_distance(original, rotated(resonances, l, k))


def conjugation_defect(resonances: list[Resonance]) -> float:
    """Matching distance between Res and its complex conjugate."""
    original = [(r.lam, r.multiplicity) for r in resonances]
    return multiset_distance(original, [(r.lam.conjugate(), r.multiplicity) for r in resonances])


def conjugate_state(state: ResonantState, window: IntervalZ) -> tuple[complex, WalkState]:
    """
    (λ̄, conj φ_λ) for a walk with real coins.

    Raises:
        DomainError: If some coin has a non-real entry
    """
    if not state.coins.is_real:
        raise DomainError("conjugation symmetry needs real coins")
    return state.lam.conjugate(), state.evaluate(window).conj()
