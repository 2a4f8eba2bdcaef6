"""
Pointwise long-time asymptotics of μ_n(x).

For n > 2|J| the expansion gives Uⁿψ(x) exactly on N_{n−1−2|J|}(J). The
resonances of modulus Λ(ψ) form the leading term; the rest decays like
n^{2p(Λ′)−2}Λ′^{2n} and bounds the error of the leading-term prediction.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
import pandas as pd

from config.globals import MODULUS_TOL
from expansion.decompose import (
    ExpansionResult,
    TimeBoundError,
    prediction_region,
    predict_evolution,
    term_evolution,
)
from resonances.states import resonant_state
from tools.logger import get_logger
from walk.coins import CoinSequence
from walk.evolution import evolve
from walk.states import IntervalError, IntervalZ, WalkState

logger = get_logger(__name__)

ROUNDING_SLACK = 1e-10


@dataclass(frozen=True)
class PointwiseReport:
    """
    Leading-term prediction of μ_n(x) against direct evolution.

    Attributes:
        x: Site
        n: Time
        predicted: ‖leading term at x‖²/‖ψ‖²
        direct: μ_n(x) from direct evolution
        remainder_bound: Bound on |μ_n(x) − predicted| from the subleading terms
        remainder_scale: n^{2p(Λ′)−2}Λ′^{2n}, the decay rate of that bound
        lambda_psi: Λ(ψ)
        lambda_prime: Λ′(ψ)
        within: |direct − predicted| ≤ remainder_bound up to rounding
    """

    x: int
    n: int
    predicted: float
    direct: float
    remainder_bound: float
    remainder_scale: float
    lambda_psi: float
    lambda_prime: float
    within: bool

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def leading_evolution(expansion: ExpansionResult, n: int, region: IntervalZ) -> WalkState:
    """Sum of the active terms with |λ| = Λ(ψ) over ``region``."""
    total = WalkState.zeros(region)
    if expansion.lambda_psi == 0.0:
        return total
    for term in expansion.active_terms():
        if abs(abs(term.lam) - expansion.lambda_psi) <= MODULUS_TOL:
            total = total + term_evolution(term, n, region)
    return total.on(region)


def pointwise_asymptotics(expansion: ExpansionResult, x: int, n: int) -> PointwiseReport:
    """
    Leading-term prediction of μ_n(x) with its remainder bound.

    Raises:
        TimeBoundError: If n ≤ 2|J|
        IntervalError: If x lies outside N_{n−1−2|J|}(J)
    """
    region = prediction_region(expansion.interval, n)
    if not region.contains(x):
        raise IntervalError(f"x={x} outside the prediction region {region} at n={n}")
    site = IntervalZ(x, x)
    norm_sq = expansion.psi.norm_sq()
    lead = leading_evolution(expansion, n, site)
    rest = predict_evolution(expansion, n).on(site) - lead
    lead_norm, rest_norm = lead.norm(), rest.norm()
    predicted = lead_norm**2 / norm_sq
    bound = (2.0 * lead_norm * rest_norm + rest_norm**2) / norm_sq

    direct_amp = evolve(expansion.coins, expansion.psi, n).at(x)
    direct = float(np.sum(np.abs(direct_amp) ** 2)) / norm_sq
    slack = 2.0 * ROUNDING_SLACK * np.sqrt(direct) + ROUNDING_SLACK**2
    within = abs(direct - predicted) <= bound * (1 + 1e-9) + slack

    lambda_prime = expansion.lambda_prime
    if lambda_prime > 0:
        p_prime = expansion.p_of(lambda_prime)
        scale = float(np.exp((2 * p_prime - 2) * np.log(n) + 2 * n * np.log(lambda_prime)))
    else:
        scale = 0.0
    if not within:
        logger.warning(
            f"mu_{n}({x}): direct {direct:.6e} vs predicted {predicted:.6e} "
            f"exceeds the remainder bound {bound:.2e}"
        )
    return PointwiseReport(
        x=x,
        n=n,
        predicted=float(predicted),
        direct=direct,
        remainder_bound=float(bound),
        remainder_scale=scale,
        lambda_psi=expansion.lambda_psi,
        lambda_prime=lambda_prime,
        within=bool(within),
    )


def pointwise_frame(expansion: ExpansionResult, x: int, times: list[int]) -> pd.DataFrame:
    """Reports for one site over several times, with μ_n(x)/Λ(ψ)^{2n}."""
    rows = []
    for n in times:
        try:
            report = pointwise_asymptotics(expansion, x, n)
        except (TimeBoundError, IntervalError):
            continue
        row = report.to_dict()
        if expansion.lambda_psi > 0:
            row["ratio"] = report.direct / expansion.lambda_psi ** (2 * n)
        rows.append(row)
    return pd.DataFrame(rows)


def restricted_state_profile(
    coins: CoinSequence, lam: complex, interval: IntervalZ, n: int
) -> pd.Series:
    """
    μ_n for ψ = 𝟙_Jφ_λ in closed form over N_n(J).

    On chs(C−I₂) it is |λ|^{2n}‖φ_λ(x)‖²/‖𝟙_Jφ_λ‖². Off the barrier it is
    c₊|λ|^{2(n−x)} to the right and c₋|λ|^{2(n+x)} to the left, with
    c± = |c±♯|²/‖𝟙_Jφ_λ‖² from the far-field amplitudes.
    """
    state = resonant_state(coins, lam)
    norm_sq = state.restricted(interval).norm_sq()
    chs = coins.chs
    modulus_sq = abs(state.lam) ** 2
    c_plus = abs(state.c_plus) ** 2 / norm_sq
    c_minus = abs(state.c_minus) ** 2 / norm_sq
    on_barrier = state.evaluate(chs).site_norms_sq() / norm_sq

    window = interval.neighborhood(n)
    values = np.zeros(window.size)
    for i, x in enumerate(window.sites()):
        if x > chs.hi:
            values[i] = c_plus * modulus_sq ** (n - x)
        elif x < chs.lo:
            values[i] = c_minus * modulus_sq ** (n + x)
        else:
            values[i] = modulus_sq**n * on_barrier[x - chs.lo]
    profile = pd.Series(values, index=pd.Index(list(window.sites()), name="x"), name="mu")
    return profile
