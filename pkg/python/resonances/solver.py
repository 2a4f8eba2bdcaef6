"""
Resonances as nonzero roots of σ(λ), with multiplicities, and the summary
quantities Λ₀, m₀ and p(Λ).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np
from numpy.typing import ArrayLike

from config.globals import MODULUS_TOL, RESIDUAL_TOL
from resonances.roots import (
    RootFindingError,
    cluster_roots,
    derivative_multiplicity,
    polynomial_roots,
)
from tools.logger import get_logger
from tools.utils import format_complex
from transfer.matrices import incoming_sigma, sigma
from walk.coins import CoinSequence

logger = get_logger(__name__)


class ResonanceKind(Enum):
    """Far-field boundary condition satisfied by the resonant state."""

    OUTGOING = "outgoing"
    INCOMING = "incoming"


@dataclass(frozen=True)
class Resonance:
    """
    A nonzero resonance.

    Attributes:
        lam: Location λ
        multiplicity: Algebraic multiplicity m(λ)
        kind: Outgoing (poles of the continued resolvent) or incoming
        residual: |f(λ)| / ‖f‖ for the defining polynomial f
    """

    lam: complex
    multiplicity: int
    kind: ResonanceKind = ResonanceKind.OUTGOING
    residual: float = 0.0

    @property
    def modulus(self) -> float:
        return abs(self.lam)

    def to_dict(self) -> dict[str, Any]:
        return {
            "re": float(self.lam.real),
            "im": float(self.lam.imag),
            "mult": int(self.multiplicity),
            "residual": float(self.residual),
            "kind": self.kind.value,
        }


@dataclass(frozen=True)
class SpectrumSummary:
    """
    Aggregate data of the resonance set.

    Attributes:
        lambda0: Λ₀, the largest resonance modulus (0 without resonances)
        m0: Largest multiplicity among resonances of modulus Λ₀
        p: Modulus → largest multiplicity at that modulus
        sum_mult: Σ m(λ)
        budget: 2(|chs|_ℤ − 1), the bound on Σ m(λ)
        zero_dims: Interval (as "[a,b]") → dim V_J(0), filled in by callers
    """

    lambda0: float
    m0: int
    p: dict[float, int]
    sum_mult: int
    budget: int
    zero_dims: dict[str, int] = field(default_factory=dict)

    def p_of(self, modulus: float) -> int:
        """p(Λ): the largest multiplicity of resonances with |λ| = Λ (0 if none)."""
        return max((m for r, m in self.p.items() if abs(r - modulus) <= MODULUS_TOL), default=0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "Lambda0": self.lambda0,
            "m0": self.m0,
            "sum_mult": self.sum_mult,
            "budget": self.budget,
            "p": [{"modulus": r, "max_mult": m} for r, m in sorted(self.p.items())],
            "zero_dims": dict(self.zero_dims),
        }


def sort_resonances(resonances: Sequence[Resonance]) -> list[Resonance]:
    """Deterministic order: by argument, then modulus."""
    return sorted(
        resonances,
        key=lambda r: (round(float(np.angle(r.lam)), 9), round(r.modulus, 9)),
    )


def polynomial_residual(coeffs: ArrayLike, lam: complex, scale: float | None = None) -> float:
    """|f(λ)| / (‖f‖·max(1,|λ|)^deg f), which is |f(λ)|/‖f‖ inside the unit disk."""
    c = np.asarray(coeffs, dtype=np.complex128)
    scale = float(np.max(np.abs(c))) if scale is None else scale
    growth = max(1.0, abs(lam)) ** (c.size - 1)
    return float(abs(np.polynomial.polynomial.polyval(lam, c)) / (scale * growth))


def resonances_from_polynomial(
    coeffs: ArrayLike,
    kind: ResonanceKind = ResonanceKind.OUTGOING,
) -> list[Resonance]:
    """
    Cluster the nonzero roots of a polynomial into resonances.

    The cluster size is the multiplicity; a Taylor-coefficient test at the
    cluster centroid confirms it and a disagreement is logged.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    scale = float(np.max(np.abs(c)))
    roots, _ = polynomial_roots(c)
    out: list[Resonance] = []
    for cluster in cluster_roots(roots):
        lam = complex(np.mean(cluster))
        m = int(cluster.size)
        confirmed = derivative_multiplicity(c, lam, m + 1, scale)
        if confirmed != m:
            logger.warning(
                f"multiplicity at {format_complex(lam)}: cluster size {m}, "
                f"derivative test {confirmed}"
            )
        residual = polynomial_residual(c, lam, scale)
        out.append(Resonance(lam, m, kind, float(residual)))
    return sort_resonances(out)


def summarize(resonances: Sequence[Resonance], k: int) -> SpectrumSummary:
    """Λ₀, m₀ and p(Λ) of a resonance list."""
    p: dict[float, int] = {}
    for res in resonances:
        key = next((r for r in p if abs(r - res.modulus) <= MODULUS_TOL), res.modulus)
        p[key] = max(p.get(key, 0), res.multiplicity)
    lambda0 = max(p, default=0.0)
    return SpectrumSummary(
        lambda0=float(lambda0),
        m0=p.get(lambda0, 0),
        p=p,
        sum_mult=sum(r.multiplicity for r in resonances),
        budget=max(0, 2 * (k - 1)),
    )


def find_resonances(
    coins: CoinSequence, tol: float = RESIDUAL_TOL
) -> tuple[list[Resonance], SpectrumSummary]:
    """
    All nonzero resonances of the walk, from the roots of σ(λ).

    Args:
        coins: Admissible coin sequence
        tol: Residual tolerance |σ(λ)| ≤ tol·‖σ‖

    Returns:
        (resonances sorted by argument, spectrum summary)

    Raises:
        RootFindingError: If the iteration fails or a residual exceeds ``tol``
    """
    if coins.is_free:
        return [], summarize([], 0)
    poly = sigma(coins)
    resonances = resonances_from_polynomial(poly.coeffs)
    bad = [r for r in resonances if r.residual > tol]
    if bad:
        raise RootFindingError(
            f"{len(bad)} resonance(s) exceed residual tolerance {tol:.1e}",
            np.array([r.residual for r in bad]),
        )
    summary = summarize(resonances, coins.k)
    outside = [r for r in resonances if r.modulus >= 1.0]
    if outside:
        logger.warning(f"{len(outside)} outgoing resonance(s) with |lambda| >= 1")
    if summary.sum_mult > summary.budget:
        logger.error(
            f"multiplicity sum {summary.sum_mult} exceeds the budget {summary.budget}"
        )
    logger.info(
        f"Found {len(resonances)} resonances (sum of multiplicities {summary.sum_mult}, "
        f"Lambda0={summary.lambda0:.6f}, m0={summary.m0})"
    )
    return resonances, summary


def incoming_resonances(coins: CoinSequence) -> list[Resonance]:
    """
    Nonzero roots of t₂₂(λ): the incoming resonances.

    The incoming far-field condition in the transfer frame reads Qψ(x⁻) ∥ e₂ and
    ψ^R(x⁺+1) = 0, which is t₂₂(λ) = 0. This characterization is derived, and it
    is checked against the reciprocal-conjugate symmetry for walks with
    c₁₁ = c₂₂.
    """
    if coins.is_free:
        return []
    poly = incoming_sigma(coins)
    return resonances_from_polynomial(poly.coeffs, ResonanceKind.INCOMING)
