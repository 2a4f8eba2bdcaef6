"""
Resonance expansion of compactly supported states and the long-time
prediction it implies.

ψ = 𝟙_J Σ_λ Σ_k c_{λ,k} φ_{λ,k} + φ₀ with φ₀ ∈ V_J(0), and for n > 2|J|_ℤ

    Uⁿψ(x) = Σ_λ λⁿ Σ_k c_{λ,k} Σ_{l<k} C(n,l) λ^{−l} φ_{λ,k−l}(x)

on N_{n−1−2|J|_ℤ}(J).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal, Sequence

import numpy as np
import scipy.linalg
from numpy.typing import NDArray
from scipy.special import comb

from config.globals import COEFFICIENT_TOL, CONDITION_WARN, MODULUS_TOL
from expansion.zero_space import ZeroSpace, zero_space
from resonances.solver import Resonance, SpectrumSummary, find_resonances, summarize
from resonances.states import JordanChain, jordan_chain
from tools.errors import DomainError
from tools.logger import get_logger
from tools.utils import format_complex
from walk.coins import CoinSequence
from walk.evolution import evolve
from walk.states import IntervalError, IntervalZ, WalkState

logger = get_logger(__name__)

TimeForm = Literal["chain", "printed"]


class TimeBoundError(DomainError):
    """The time-domain formula needs n > 2|J|_ℤ."""

    def __init__(self, n: int, interval: IntervalZ):
        super().__init__(
            f"time formula needs n > 2|J| = {2 * interval.size} for J={interval}, got n={n}"
        )
        self.n = n
        self.interval = interval


@dataclass(frozen=True)
class ExpansionTerm:
    """
    Contribution of one resonance.

    Attributes:
        resonance: λ with its multiplicity
        chain: Jordan chain φ_{λ,1..m}
        coefficients: c_{λ,1..m}
        weights: |c_{λ,k}|·‖𝟙_Jφ_{λ,k}‖
    """

    resonance: Resonance
    chain: JordanChain
    coefficients: NDArray[np.complex128]
    weights: NDArray[np.float64]

    @property
    def lam(self) -> complex:
        return self.resonance.lam

    def is_active(self, threshold: float) -> bool:
        return bool(np.any(self.weights > threshold))

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "mult": self.resonance.multiplicity,
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
            "weights": [float(w) for w in self.weights],
        }


@dataclass(frozen=True)
class ExpansionResult:
    """
    Coefficients of ψ in the basis {𝟙_Jφ_{λ,k}} ∪ V_J(0).

    Attributes:
        coins: The walk
        interval: J
        psi: ψ stored over J
        terms: One entry per nonzero resonance
        zero_part: φ₀ ∈ V_J(0)
        zero: The zero space used
        summary: Spectrum summary of the walk
        residual: ‖ψ − reconstruction‖ / ‖ψ‖
        condition: Condition number of the column-scaled basis
        lambda_psi: Λ(ψ), 0 when no coefficient is active
        lambda_prime: Λ′(ψ), the next smaller active modulus (0 if none)
    """

    coins: CoinSequence
    interval: IntervalZ
    psi: WalkState
    terms: list[ExpansionTerm]
    zero_part: WalkState
    zero: ZeroSpace
    summary: SpectrumSummary
    residual: float
    condition: float
    lambda_psi: float
    lambda_prime: float
    threshold: float = field(default=0.0)

    def active_terms(self) -> list[ExpansionTerm]:
        return [t for t in self.terms if t.is_active(self.threshold)]

    def active_moduli(self) -> list[float]:
        moduli: list[float] = []
        for term in self.active_terms():
            r = abs(term.lam)
            if not any(abs(r - m) <= MODULUS_TOL for m in moduli):
                moduli.append(r)
        return sorted(moduli, reverse=True)

    def p_of(self, modulus: float) -> int:
        """Largest multiplicity among resonances of modulus ``modulus``."""
        return self.summary.p_of(modulus)

    def to_dict(self) -> dict[str, Any]:
        return {
            "J": [self.interval.lo, self.interval.hi],
            "terms": [t.to_dict() for t in self.terms],
            "zero_dim": self.zero.dimension,
            "zero_norm": self.zero_part.norm(),
            "residual": self.residual,
            "condition": self.condition,
            "Lambda_psi": self.lambda_psi,
            "Lambda_prime": self.lambda_prime,
            "p_Lambda_psi": self.p_of(self.lambda_psi) if self.lambda_psi > 0 else 0,
        }


def check_interval(coins: CoinSequence, psi: WalkState, interval: IntervalZ) -> None:
    """
    Raises:
        IntervalError: If J does not contain supp ψ ∪ chs(C−I₂)
    """
    needed = psi.support().hull(coins.chs)
    if interval.is_empty or not interval.contains_interval(needed):
        raise IntervalError(f"J={interval} must contain supp psi and chs(C-I2), i.e. {needed}")


def expand(
    coins: CoinSequence,
    psi: WalkState,
    interval: IntervalZ,
    resonances: Sequence[Resonance] | None = None,
) -> ExpansionResult:
    """
    Resonance expansion of ψ on J.

    Solved by least squares in the column-scaled basis of restricted Jordan
    chains and V_J(0); an ill-conditioned basis is logged together with the
    reconstruction residual.

    Raises:
        IntervalError: If J does not contain supp ψ ∪ chs(C−I₂)
    """
    check_interval(coins, psi, interval)
    if resonances is None:
        resonances, summary = find_resonances(coins)
    else:
        summary = summarize(resonances, coins.k)

    chains = [jordan_chain(coins, res) for res in resonances]
    columns: list[NDArray[np.complex128]] = []
    for chain in chains:
        columns.extend(state.vector() for state in chain.evaluate(interval))
    zero = zero_space(coins, interval)
    basis = np.column_stack(columns + [zero.basis[:, j] for j in range(zero.dimension)])
    size = 2 * interval.size
    if basis.shape[1] != size:
        logger.warning(
            f"basis has {basis.shape[1]} columns for a space of dimension {size} "
            f"(sum of multiplicities {summary.sum_mult}, dim V_J(0) {zero.dimension})"
        )

    norms = np.linalg.norm(basis, axis=0)
    scaled = basis / norms
    target = psi.restrict(interval).vector()
    solution, _, _, singular = scipy.linalg.lstsq(scaled, target)
    condition = float(singular[0] / singular[-1]) if singular[-1] > 0 else float("inf")
    coefficients = solution / norms
    psi_norm = float(np.linalg.norm(target))
    residual = float(np.linalg.norm(scaled @ solution - target) / psi_norm) if psi_norm else 0.0
    if condition > CONDITION_WARN:
        logger.warning(
            f"ill-conditioned expansion basis on J={interval}: condition {condition:.2e}, "
            f"residual {residual:.2e}"
        )

    terms: list[ExpansionTerm] = []
    offset = 0
    for res, chain in zip(resonances, chains):
        m = chain.length
        terms.append(
            ExpansionTerm(
                res,
                chain,
                coefficients[offset : offset + m].copy(),
                np.abs(solution[offset : offset + m]),
            )
        )
        offset += m
    zero_part = WalkState.from_vector(interval, zero.basis @ coefficients[offset:])

    threshold = COEFFICIENT_TOL * psi_norm
    active = sorted(
        {round(abs(t.lam), 12) for t in terms if t.is_active(threshold)}, reverse=True
    )
    lambda_psi = active[0] if active else 0.0
    lambda_prime = next((r for r in active if r < lambda_psi - MODULUS_TOL), 0.0)
    logger.info(
        f"Expanded psi on J={interval}: {len(terms)} resonances, dim V_J(0)={zero.dimension}, "
        f"residual {residual:.2e}, Lambda(psi)={lambda_psi:.6f}"
    )
    return ExpansionResult(
        coins=coins,
        interval=interval,
        psi=psi.restrict(interval),
        terms=terms,
        zero_part=zero_part,
        zero=zero,
        summary=summary,
        residual=residual,
        condition=condition,
        lambda_psi=float(lambda_psi),
        lambda_prime=float(lambda_prime),
        threshold=threshold,
    )


def reconstruct(expansion: ExpansionResult) -> WalkState:
    """𝟙_J Σ c_{λ,k}φ_{λ,k} + φ₀ over J."""
    total = expansion.zero_part
    for term in expansion.terms:
        for c, state in zip(term.coefficients, term.chain.evaluate(expansion.interval)):
            total = total + state.scaled(c)
    return total.on(expansion.interval)


def prediction_region(interval: IntervalZ, n: int) -> IntervalZ:
    """N_{n−1−2|J|_ℤ}(J)."""
    if n <= 2 * interval.size:
        raise TimeBoundError(n, interval)
    return interval.neighborhood(n - 1 - 2 * interval.size)


def term_evolution(
    term: ExpansionTerm, n: int, region: IntervalZ, form: TimeForm = "chain"
) -> WalkState:
    """λⁿ Σ_k c_{λ,k} Σ_{l<k} C(n,l) λ^{−l} φ_{λ,k−l} over ``region``."""
    lam = term.lam
    members = term.chain.evaluate(region)
    total = np.zeros((region.size, 2), dtype=np.complex128)
    for k in range(1, term.chain.length + 1):
        c = term.coefficients[k - 1]
        if c == 0:
            continue
        for l in range(k):
            weight = comb(n, l) * lam ** (n - l)
            if form == "chain":
                total += c * weight * members[k - l - 1].amplitudes
            elif k >= 2:
                total += c * weight * members[k - 2].amplitudes
    return WalkState(region.lo, total)


def predict_evolution(
    expansion: ExpansionResult, n: int, form: TimeForm = "chain"
) -> WalkState:
    """
    Uⁿψ on N_{n−1−2|J|_ℤ}(J) from the expansion.

    Args:
        expansion: Output of :func:`expand`
        n: Time, n > 2|J|_ℤ
        form: ``"chain"`` uses φ_{λ,k−l}; ``"printed"`` uses φ_{λ,k−1} with φ_{λ,0} = 0

    Raises:
        TimeBoundError: If n ≤ 2|J|_ℤ
    """
    region = prediction_region(expansion.interval, n)
    total = WalkState.zeros(region)
    for term in expansion.terms:
        total = total + term_evolution(term, n, region, form)
    return total.on(region)


def verify_time_formula(expansion: ExpansionResult, times: Sequence[int]) -> dict[str, Any]:
    """
    Max-norm error of both time-domain forms against direct evolution.

    Returns:
        Dict with ``chain_error``, ``printed_error`` (relative to ‖ψ‖) and
        ``matches`` naming the forms within 1e−8
    """
    norm = expansion.psi.norm() or 1.0
    errors = {"chain": 0.0, "printed": 0.0}
    valid = sorted(t for t in times if t > 2 * expansion.interval.size)
    if not valid:
        raise TimeBoundError(max(times, default=0), expansion.interval)
    times = valid
    state = expansion.psi
    previous = 0
    for n in times:
        state = evolve(expansion.coins, state, n - previous)
        previous = n
        region = prediction_region(expansion.interval, n)
        for form in errors:
            predicted = predict_evolution(expansion, n, form)  # type: ignore[arg-type]
            errors[form] = max(errors[form], predicted.max_abs_diff(state, region) / norm)
    matches = [form for form, err in errors.items() if err <= 1e-8]
    logger.info(
        f"time formula on {len(times)} times: chain error {errors['chain']:.2e}, "
        f"printed error {errors['printed']:.2e}"
    )
    return {
        "chain_error": errors["chain"],
        "printed_error": errors["printed"],
        "matches": matches,
        "times": [int(times[0]), int(times[-1])],
    }


def coefficient_for(expansion: ExpansionResult, lam: complex) -> NDArray[np.complex128]:
    """c_{λ,·} for the resonance nearest ``lam``."""
    term = min(expansion.terms, key=lambda t: abs(t.lam - lam))
    if abs(term.lam - lam) > 1e-6 * max(1.0, abs(lam)):
        raise DomainError(f"no resonance near {format_complex(lam)} in the expansion")
    return term.coefficients
