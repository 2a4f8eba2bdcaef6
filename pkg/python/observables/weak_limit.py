"""
Weak limit of X_n/n: a two-point mass at ±1 with weights c₋, c₊.

Outside chs(C−I₂) the walk is free, so right-movers right of the barrier and
left-movers left of it have escaped for good:

    ĉ₊(n) = ‖χ♯₊Uⁿψ‖² = Σ_{x>x⁺} |ψ_n^R(x)|²,   ĉ₋(n) = Σ_{x<x⁻} |ψ_n^L(x)|²,

and |c± − ĉ±(n)| ≤ ‖χ♭Uⁿψ‖², the mass still able to move either way.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
import pandas as pd

from config.globals import UNITARY_TOL
from resonances.states import resonant_state
from tools.errors import DomainError
from tools.logger import get_logger
from walk.coins import CoinSequence
from walk.evolution import evolve, trajectory
from walk.states import IntervalZ, WalkState

logger = get_logger(__name__)

CONSERVATION_TOL = 1e-10


@dataclass(frozen=True)
class WeakLimitReport:
    """
    Escaped masses at time n.

    Attributes:
        n: Time
        c_plus: ĉ₊(n)
        c_minus: ĉ₋(n)
        flat_norm: ‖χ♭Uⁿψ‖², the error bound on both estimates
        closed_form: (c₋, c₊) of a restricted resonant state, when given
        within_bound: Whether the closed form lies within ``flat_norm`` of the estimates
    """

    n: int
    c_plus: float
    c_minus: float
    flat_norm: float
    closed_form: tuple[float, float] | None = None
    within_bound: bool | None = None

    @property
    def total(self) -> float:
        return self.c_plus + self.c_minus + self.flat_norm

    def consistent_with(self, other: WeakLimitReport) -> bool:
        """|ĉ±(n) − ĉ±(n′)| ≤ ‖χ♭Uⁿψ‖² + ‖χ♭U^{n′}ψ‖²."""
        slack = self.flat_norm + other.flat_norm + CONSERVATION_TOL
        return (
            abs(self.c_plus - other.c_plus) <= slack
            and abs(self.c_minus - other.c_minus) <= slack
        )

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["total"] = self.total
        return out


def reference_interval(coins: CoinSequence, psi: WalkState) -> IntervalZ:
    """chs(C−I₂), or supp ψ for the free walk."""
    return coins.chs if not coins.is_free else psi.support()


def escaped_masses(state: WalkState, interval: IntervalZ) -> tuple[float, float, float]:
    """(ĉ₊, ĉ₋, ‖χ♭ψ‖²) of a normalized state relative to ``interval``."""
    x = np.arange(state.lo, state.hi + 1)
    left = np.abs(state.left) ** 2
    right = np.abs(state.right) ** 2
    c_plus = float(right[x > interval.hi].sum())
    c_minus = float(left[x < interval.lo].sum())
    flat = float(left[x >= interval.lo].sum() + right[x <= interval.hi].sum())
    return c_plus, c_minus, flat


def restricted_weak_limit(
    coins: CoinSequence, lam: complex, interval: IntervalZ
) -> tuple[float, float]:
    """
    (c₋, c₊) = (a₋, a₊)/(a₋ + a₊) for ψ = 𝟙_Jφ_λ.

    a± are the squared amplitudes of φ_λ on the two sites of N₁(J)∖J, where
    the mass leaving J is measured.
    """
    state = resonant_state(coins, lam).evaluate(interval.neighborhood(1))
    a_minus = float(np.sum(np.abs(state.at(interval.lo - 1)) ** 2))
    a_plus = float(np.sum(np.abs(state.at(interval.hi + 1)) ** 2))
    total = a_minus + a_plus
    if total == 0.0:
        raise DomainError(f"resonant state vanishes next to J={interval}")
    return a_minus / total, a_plus / total


def weak_limit(
    coins: CoinSequence,
    psi: WalkState,
    n: int,
    closed_form: tuple[float, float] | None = None,
) -> WeakLimitReport:
    """
    Estimates ĉ± at time n for the normalized ψ.

    Args:
        coins: The walk
        psi: Initial state, normalized internally
        n: Time
        closed_form: Known (c₋, c₊), checked against the estimates

    Raises:
        DomainError: If ψ = 0 or probability is not conserved
    """
    state = evolve(coins, psi.normalized(), n)
    c_plus, c_minus, flat = escaped_masses(state, reference_interval(coins, psi))
    if abs(c_plus + c_minus + flat - 1.0) > CONSERVATION_TOL:
        raise DomainError(f"probability not conserved at n={n}: {c_plus + c_minus + flat:.12f}")

    within: bool | None = None
    if closed_form is not None:
        slack = flat + UNITARY_TOL
        within = abs(closed_form[0] - c_minus) <= slack and abs(closed_form[1] - c_plus) <= slack
        if not within:
            logger.warning(
                f"weak-limit estimates ({c_minus:.8f}, {c_plus:.8f}) at n={n} miss the closed "
                f"form ({closed_form[0]:.8f}, {closed_form[1]:.8f}) by more than {flat:.2e}"
            )
    logger.debug(f"weak limit at n={n}: c+={c_plus:.8f}, c-={c_minus:.8f}, flat={flat:.2e}")
    return WeakLimitReport(n, c_plus, c_minus, flat, closed_form, within)


def time_series_frame(
    coins: CoinSequence, psi: WalkState, interval: IntervalZ, n_max: int
) -> pd.DataFrame:
    """
    Frame with ``n, survival, c_plus, c_minus, flat_norm`` for n = 0..n_max.

    ``survival`` is the normalized ‖𝟙_JUⁿψ‖²/‖ψ‖².
    """
    start = psi.normalized()
    reference = reference_interval(coins, psi)
    rows = []
    for n, state in enumerate(trajectory(coins, start, n_max)):
        c_plus, c_minus, flat = escaped_masses(state, reference)
        rows.append(
            {
                "n": n,
                "survival": state.restrict(interval).norm_sq(),
                "c_plus": c_plus,
                "c_minus": c_minus,
                "flat_norm": flat,
            }
        )
    return pd.DataFrame(rows, columns=["n", "survival", "c_plus", "c_minus", "flat_norm"])
