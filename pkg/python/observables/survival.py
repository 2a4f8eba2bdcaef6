"""
Survival in a window J and the mean exit time.

The survival series s_n = ‖𝟙_JUⁿψ‖² is computed by direct evolution and fitted
against the decay predicted by the resonance expansion,

    ‖𝟙_JUⁿψ‖ ≤ M′ n^{p(Λ(ψ))−1} Λ(ψ)ⁿ,

and the mean survival time τ(J, ψ) = Σ n μ_n(N₁(J)∖J) is bounded through the
functions Υ_k(r) = r^{k−2}(d/dr)^k (1 − r²)⁻¹.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
import pandas as pd
from numpy.typing import NDArray
from scipy.special import factorial, gammaln

from config.globals import COEFFICIENT_TOL, SURVIVAL_FLOOR
from expansion.decompose import ExpansionResult, check_interval, expand
from tools.errors import DomainError
from tools.logger import get_logger
from walk.coins import CoinSequence
from walk.evolution import trajectory
from walk.states import IntervalZ, WalkState

logger = get_logger(__name__)

ENVELOPE_SLACK = 1e-6
TAIL_CHUNK = 4096
TAIL_MAX_TERMS = 10**7


@dataclass(frozen=True)
class DecayReport:
    """
    Fitted decay of the survival series next to the resonance prediction.

    Attributes:
        slope: Fitted slope of log s_n − 2(p−1) log n against n
        norm_log_slope: slope / 2, the fitted log-rate of ‖𝟙_JUⁿψ‖
        rate: exp(norm_log_slope)
        degree: p(Λ(ψ)) − 1, the polynomial degree used in the fit
        fit_window: (first, last) time used by the fit
        fit_residual: RMS residual of the fit
        lambda0: Λ₀
        m0: m₀
        lambda_psi: Λ(ψ)
        p_psi: p(Λ(ψ))
        slope_error: |norm_log_slope − log Λ(ψ)| / |log Λ(ψ)| (nan without Λ(ψ))
        M: max of ‖𝟙_JUⁿψ‖/(‖ψ‖ n^{m₀−1} Λ₀ⁿ) over n ≥ n₀
        M_prime: the same ratio for Λ(ψ), p(Λ(ψ)), measured on [n₀, n₀ + 2|J|]
        envelope_holds: Whether every later n stays below the M′ envelope
        partial: Too few points above the underflow floor for a fit
    """

    slope: float
    norm_log_slope: float
    rate: float
    degree: int
    fit_window: tuple[int, int]
    fit_residual: float
    lambda0: float
    m0: int
    lambda_psi: float
    p_psi: int
    slope_error: float
    M: float
    M_prime: float
    envelope_holds: bool
    partial: bool

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class SurvivalReport:
    """
    Mean survival time with its truncation tail and the Υ bounds.

    Attributes:
        tau: Σ_{n≤n_max} n μ_n(N₁(J)∖J)
        tau_flux: Σ_{n≤n_max} n (s_{n−1} − s_n) on the normalized series
        n_max: Truncation time
        tail_bound: Bound on the omitted terms n > n_max
        bound_lambda0: Υ bound built on Λ₀ and m₀
        bound_lambda_psi: Υ bound built on Λ(ψ) and p(Λ(ψ))
        bound: The smaller of the two
        bound_holds: tau ≤ bound
        M: Envelope constant of ‖𝟙_JUⁿψ‖ against n^{m₀−1}Λ₀ⁿ used by the Λ₀ bound
        M_prime: Envelope constant against n^{p−1}Λ(ψ)ⁿ used by the Λ(ψ) bound
        restricted_tau: 1/(1−|λ|²) when ψ is a restricted resonant state, else None
    """

    tau: float
    tau_flux: float
    n_max: int
    tail_bound: float
    bound_lambda0: float
    bound_lambda_psi: float
    bound: float
    bound_holds: bool
    M: float
    M_prime: float
    restricted_tau: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def upsilon(k: int, r: float) -> float:
    """
    Υ_k(r) = r^{k−2}(d/dr)^k (1 − r²)⁻¹ for 0 ≤ r < 1, in closed form

        Υ_k(r) = r^{k−2} · k!/2 · ((1−r)^{−k−1} + (−1)^k (1+r)^{−k−1}).

    Examples:
        >>> round(upsilon(1, 0.5), 12) == round(2 / (1 - 0.25) ** 2, 12)
        True
    """
    if k < 1:
        raise DomainError(f"Upsilon_k needs k >= 1, got {k}")
    if not 0.0 <= r < 1.0:
        raise DomainError(f"Upsilon_k needs 0 <= r < 1, got {r}")
    if r == 0.0:
        # the series Σ_j (2j)!/(2j−k)! r^{2j−2} only keeps j = 1 when k ≤ 2
        return 2.0 if k in (1, 2) else 0.0
    bracket = (1.0 - r) ** (-k - 1) + (-1) ** k * (1.0 + r) ** (-k - 1)
    return float(r ** (k - 2) * 0.5 * factorial(k, exact=True) * bracket)


def restricted_state_tau(lam: complex) -> float:
    """τ(J, 𝟙_Jφ_λ) = 1/(1−|λ|²)."""
    modulus_sq = abs(lam) ** 2
    if modulus_sq >= 1.0:
        raise DomainError(f"mean survival time diverges for |lambda| = {abs(lam):.6f}")
    return 1.0 / (1.0 - modulus_sq)


def _log_upsilon_terms(n: NDArray[np.float64], p: int, modulus: float) -> NDArray[np.float64]:
    """log of 2^{1−2p}(2n)!/(2n−2p+1)! Λ^{2n−2}, the n-th term of 2^{1−2p}Υ_{2p−1}(Λ)."""
    out = np.full(n.shape, -np.inf)
    valid = n >= p
    nv = n[valid]
    out[valid] = (
        (1 - 2 * p) * math.log(2.0)
        + gammaln(2 * nv + 1)
        - gammaln(2 * nv - 2 * p + 2)
        + (2 * nv - 2) * math.log(modulus)
    )
    return out


def _upsilon_tail(p: int, modulus: float, start: int) -> float:
    """Σ_{n ≥ start} of the Υ_{2p−1} terms, summed in chunks until negligible."""
    if modulus == 0.0:
        return 0.0
    total = 0.0
    for lo in range(start, start + TAIL_MAX_TERMS, TAIL_CHUNK):
        terms = np.exp(_log_upsilon_terms(np.arange(lo, lo + TAIL_CHUNK, dtype=float), p, modulus))
        total += float(terms.sum())
        if terms[-1] <= 1e-18 * max(total, 1e-300) and terms[-1] <= terms[0]:
            break
    return total


def envelope_constant(probability: NDArray[np.float64], modulus: float, p: int) -> float:
    """
    Smallest M with ‖𝟙_JUⁿψ‖/‖ψ‖ ≤ M n^{p−1} Λⁿ on the computed range.

    ``probability`` holds s_n/‖ψ‖² with index n; n = 0 only enters when p = 1.
    """
    if modulus <= 0.0 or probability.size == 0:
        return 0.0
    times = np.arange(probability.size, dtype=float)
    start = 0 if p == 1 else 1
    ratios = _envelope_ratio(probability[start:], np.maximum(times[start:], 1.0), modulus, p)
    return float(np.exp(np.max(ratios))) if ratios.size else 0.0


def upsilon_bound(
    probability: NDArray[np.float64], p: int, modulus: float, envelope: float
) -> tuple[float, float]:
    """
    Υ bound of τ for one (Λ, p) pair and envelope constant M.

    Since μ_n(N₁(J)∖J) ≤ s_{n−1}, τ ≤ Σ n s_{n−1}. For n ≥ p the envelope gives
    n s_{n−1} ≤ M² × (n-th term of 2^{1−2p}Υ_{2p−1}(Λ)); the terms n < p are added
    as measured.

    Args:
        probability: s_n/‖ψ‖² with index n
        p: Polynomial order of the envelope
        modulus: Λ
        envelope: M

    Returns:
        (bound including the tail, tail beyond the computed range)
    """
    n = np.arange(1, probability.size + 1, dtype=float)
    weighted = n * probability
    if modulus == 0.0:
        return float(weighted.sum()), 0.0
    early = float(weighted[n < p].sum())
    m_sq = envelope**2
    full = m_sq * 2.0 ** (1 - 2 * p) * upsilon(2 * p - 1, modulus)
    tail = m_sq * _upsilon_tail(p, modulus, probability.size)
    return full + early, tail


def _envelope_ratio(
    probability: NDArray[np.float64], times: NDArray[np.float64], modulus: float, p: int
) -> NDArray[np.float64]:
    """log ‖𝟙_JUⁿψ‖/‖ψ‖ − log(n^{p−1}Λⁿ)."""
    with np.errstate(divide="ignore"):
        log_norm = 0.5 * np.log(probability)
    return log_norm - (p - 1) * np.log(times) - times * math.log(modulus)


def survival_series(
    coins: CoinSequence, psi: WalkState, interval: IntervalZ, n_max: int
) -> pd.DataFrame:
    """Frame with ``n, survival, probability``: s_n = ‖𝟙_JUⁿψ‖² and s_n/‖ψ‖²."""
    norm_sq = psi.norm_sq()
    if norm_sq == 0.0:
        raise DomainError("survival needs a nonzero initial state")
    values = np.array(
        [state.restrict(interval).norm_sq() for state in trajectory(coins, psi, n_max)]
    )
    return pd.DataFrame(
        {"n": np.arange(n_max + 1), "survival": values, "probability": values / norm_sq}
    )


def fit_decay(
    frame: pd.DataFrame,
    expansion: ExpansionResult,
    window: tuple[int, int] | None = None,
) -> DecayReport:
    """
    Fit log s_n − 2(p−1) log n = a + slope·n and measure the envelope constants.

    Args:
        frame: Output of :func:`survival_series`
        expansion: Resonance expansion of the same ψ on the same J
        window: Explicit (first, last) fit times; defaults to the last half of
            the usable range beyond n₀ = 2|J| + 1
    """
    interval = expansion.interval
    n0 = 2 * interval.size + 1
    summary = expansion.summary
    lambda_psi = expansion.lambda_psi
    p_psi = expansion.p_of(lambda_psi) if lambda_psi > 0 else 0
    degree = max(p_psi - 1, 0)

    times = frame["n"].to_numpy(dtype=float)
    survival = frame["survival"].to_numpy()
    probability = frame["probability"].to_numpy()
    usable = survival > SURVIVAL_FLOOR * max(survival[0], 1e-300)
    usable_times = times[usable & (times >= n0)]

    if window is None:
        if usable_times.size:
            last = int(usable_times[-1])
            first = max(n0, last - (last - n0) // 2)
        else:
            first = last = n0
    else:
        first, last = window
    mask = usable & (times >= first) & (times <= last) & (times >= 1)

    slope = fit_residual = float("nan")
    partial = int(mask.sum()) < 3
    if partial:
        logger.warning(
            f"only {int(mask.sum())} usable survival points in [{first}, {last}]; "
            "reporting a partial decay fit"
        )
    else:
        t = times[mask]
        y = np.log(survival[mask]) - 2 * degree * np.log(t)
        coeffs = np.polyfit(t, y, 1)
        slope = float(coeffs[0])
        fit_residual = float(np.sqrt(np.mean((np.polyval(coeffs, t) - y) ** 2)))

    norm_log_slope = slope / 2.0
    slope_error = (
        abs(norm_log_slope - math.log(lambda_psi)) / abs(math.log(lambda_psi))
        if lambda_psi > 0 and not partial
        else float("nan")
    )

    late = times >= n0
    if summary.lambda0 > 0 and np.any(late):
        ratios0 = _envelope_ratio(probability[late], times[late], summary.lambda0, summary.m0)
        M = float(np.exp(np.max(ratios0)))
    else:
        M = 0.0

    calibrate = late & (times <= n0 + 2 * interval.size)
    later = times > n0 + 2 * interval.size
    if lambda_psi > 0 and np.any(calibrate):
        ratios = _envelope_ratio(probability, np.maximum(times, 1.0), lambda_psi, p_psi)
        log_m_prime = float(np.max(ratios[calibrate]))
        M_prime = float(np.exp(log_m_prime))
        envelope_holds = bool(np.all(ratios[later] <= log_m_prime + ENVELOPE_SLACK))
    else:
        M_prime = 0.0
        envelope_holds = bool(np.all(probability[times > 2 * interval.size] <= COEFFICIENT_TOL**2))
    if not envelope_holds:
        logger.warning(
            f"survival exceeds the measured envelope M'={M_prime:.4e} n^{degree} "
            f"Lambda(psi)^n after n={n0 + 2 * interval.size}"
        )

    rate = math.exp(norm_log_slope) if not partial else float("nan")
    logger.info(f"Decay fit on [{first}, {last}]: rate {rate:.8f} vs Lambda(psi)={lambda_psi:.8f}")
    return DecayReport(
        slope=slope,
        norm_log_slope=norm_log_slope,
        rate=rate,
        degree=degree,
        fit_window=(int(first), int(last)),
        fit_residual=fit_residual,
        lambda0=summary.lambda0,
        m0=summary.m0,
        lambda_psi=lambda_psi,
        p_psi=p_psi,
        slope_error=slope_error,
        M=M,
        M_prime=M_prime,
        envelope_holds=envelope_holds,
        partial=partial,
    )


def survival(
    coins: CoinSequence,
    psi: WalkState,
    interval: IntervalZ,
    n_max: int,
    expansion: ExpansionResult | None = None,
    window: tuple[int, int] | None = None,
) -> tuple[pd.DataFrame, DecayReport]:
    """
    Survival series ‖𝟙_JUⁿψ‖² for n ≤ n_max and its fitted decay.

    Raises:
        IntervalError: If J does not contain supp ψ ∪ chs(C−I₂)
        DomainError: If ψ = 0
    """
    check_interval(coins, psi, interval)
    frame = survival_series(coins, psi, interval, n_max)
    expansion = expansion or expand(coins, psi, interval)
    return frame, fit_decay(frame, expansion, window)


def _exit_masses(frame: pd.DataFrame) -> NDArray[np.float64]:
    """μ_n(N₁(J)∖J) = s_{n−1} − s_n on the normalized series, with index n."""
    probability = frame["probability"].to_numpy()
    exits = np.zeros_like(probability)
    exits[1:] = np.maximum(probability[:-1] - probability[1:], 0.0)
    return exits


def mean_survival_time(
    coins: CoinSequence,
    psi: WalkState,
    interval: IntervalZ,
    n_max: int,
    expansion: ExpansionResult | None = None,
    restricted_lambda: complex | None = None,
    envelope: tuple[float, float] | None = None,
) -> SurvivalReport:
    """
    τ(J, ψ) = Σ n μ_n(N₁(J)∖J), truncated at n_max, with its tail and Υ bounds.

    The site-count sum reads μ_n on the two sites just outside J; the flux
    form Σ n(s_{n−1} − s_n) is reported next to it.

    Args:
        coins: The walk
        psi: Initial state
        interval: J ⊇ supp ψ ∪ chs(C−I₂)
        n_max: Truncation time
        expansion: Precomputed expansion of ψ on J
        restricted_lambda: λ when ψ = 𝟙_Jφ_λ, to report 1/(1−|λ|²)
        envelope: (M, M′) to use instead of the constants measured on the
            survival series up to n_max
    """
    check_interval(coins, psi, interval)
    expansion = expansion or expand(coins, psi, interval)
    norm_sq = psi.norm_sq()
    boundary = [interval.lo - 1, interval.hi + 1]

    probabilities = [1.0]
    exits = [0.0]
    for n_step, state in enumerate(trajectory(coins, psi, n_max)):
        if n_step == 0:
            continue
        probabilities.append(state.restrict(interval).norm_sq() / norm_sq)
        exits.append(sum(float(np.sum(np.abs(state.at(x)) ** 2)) for x in boundary) / norm_sq)
    frame = pd.DataFrame({"n": np.arange(n_max + 1), "probability": probabilities})
    exit_mass = np.asarray(exits)
    n = np.arange(n_max + 1, dtype=float)
    tau = float(np.sum(n * exit_mass))
    tau_flux = float(np.sum(n * _exit_masses(frame)))

    summary = expansion.summary
    lambda_psi = expansion.lambda_psi
    p_psi = max(expansion.p_of(lambda_psi), 1) if lambda_psi > 0 else 1
    m0 = max(summary.m0, 1)
    survived = np.asarray(probabilities)
    if envelope is None:
        envelope = (
            envelope_constant(survived, summary.lambda0, m0),
            envelope_constant(survived, lambda_psi, p_psi),
        )
    m_const, m_prime = envelope
    bound_psi, tail_psi = upsilon_bound(survived, p_psi, lambda_psi, m_prime)
    if summary.lambda0 > 0:
        bound_0, tail_0 = upsilon_bound(survived, m0, summary.lambda0, m_const)
    else:
        bound_0, tail_0 = bound_psi, tail_psi
    tail_bound = min(tail_psi, tail_0)
    bound = min(bound_psi, bound_0)
    holds = tau <= bound * (1 + 1e-9) + 1e-15
    if not holds:
        logger.warning(f"truncated tau {tau:.8f} exceeds the Upsilon bound {bound:.8f}")

    restricted = restricted_state_tau(restricted_lambda) if restricted_lambda is not None else None
    logger.info(
        f"Mean survival time on J={interval}: tau={tau:.8f} (tail <= {tail_bound:.2e}), "
        f"bound {bound:.8f}"
    )
    return SurvivalReport(
        tau=tau,
        tau_flux=tau_flux,
        n_max=n_max,
        tail_bound=tail_bound,
        bound_lambda0=bound_0,
        bound_lambda_psi=bound_psi,
        bound=bound,
        bound_holds=bool(holds),
        M=m_const,
        M_prime=m_prime,
        restricted_tau=restricted,
    )
