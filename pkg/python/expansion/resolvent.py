"""
Cut-off resolvent R_J(λ) = (E_J − λ)⁻¹, the free-walk resolvent series and
the spectral projector Π_{λ₀} by contour quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from config.globals import POLE_TOL, QUADRATURE_NODES
from resonances.cutoff import cutoff_matrix
from resonances.solver import Resonance, find_resonances
from tools.errors import DomainError
from tools.logger import get_logger
from tools.utils import format_complex
from walk.coins import CoinSequence
from walk.states import IntervalError, IntervalZ, WalkState

logger = get_logger(__name__)


class ResolventPoleError(DomainError):
    """λ is an eigenvalue of E_J."""

    def __init__(self, lam: complex, smallest_singular: float):
        super().__init__(
            f"resolvent pole at lambda={format_complex(lam)} "
            f"(smallest singular value {smallest_singular:.3e})"
        )
        self.lam = lam
        self.smallest_singular = smallest_singular


def _shifted(coins: CoinSequence, interval: IntervalZ, lam: complex) -> NDArray[np.complex128]:
    e = cutoff_matrix(coins, interval).matrix
    shifted = e - lam * np.eye(e.shape[0], dtype=np.complex128)
    smallest = float(scipy.linalg.svdvals(shifted)[-1])
    if smallest <= POLE_TOL * max(1.0, abs(lam)):
        raise ResolventPoleError(lam, smallest)
    return shifted


def resolvent_apply(
    coins: CoinSequence, interval: IntervalZ, lam: complex, f: WalkState
) -> WalkState:
    """
    u = (E_J − λ)⁻¹ f for f supported in J.

    Raises:
        IntervalError: If supp f is not inside J
        ResolventPoleError: If λ is (numerically) an eigenvalue of E_J
    """
    if not interval.contains_interval(f.support()):
        raise IntervalError(f"f must be supported in J={interval}, got {f.support()}")
    shifted = _shifted(coins, interval, complex(lam))
    u = scipy.linalg.solve(shifted, f.restrict(interval).vector())
    return WalkState.from_vector(interval, u)


def free_resolvent_apply(
    psi: WalkState, lam: complex, window: IntervalZ, terms: int | None = None
) -> WalkState:
    """
    R₀(λ)ψ(x) = −Σ_{y≥0} λ^{−y−1}(ψ^L(x+y), ψ^R(x−y)) over ``window``.

    For finitely supported ψ the sum stops once x±y leaves the support, so
    ``terms=None`` gives the exact value; otherwise it is the partial sum over
    y < ``terms``.
    """
    lam = complex(lam)
    if lam == 0:
        raise DomainError("free resolvent series needs lambda != 0")
    if terms is None:
        terms = max(psi.hi - window.lo, window.hi - psi.lo, 0) + 1
    out = np.zeros((window.size, 2), dtype=np.complex128)
    for y in range(terms):
        weight = -(lam ** (-y - 1))
        shifted_left = psi.on(IntervalZ(window.lo + y, window.hi + y)).left
        shifted_right = psi.on(IntervalZ(window.lo - y, window.hi - y)).right
        out[:, 0] += weight * shifted_left
        out[:, 1] += weight * shifted_right
    return WalkState(window.lo, out)


@dataclass(frozen=True)
class ContourProjector:
    """
    Π_{λ₀} = −(2πi)⁻¹∮_{|λ−λ₀|=ρ} R_J(λ) dλ by the trapezoid rule.

    Attributes:
        interval: J
        lam0: Centre of the circle
        radius: ρ
        matrix: The projector in the site-major (L, R) basis of J
    """

    interval: IntervalZ
    lam0: complex
    radius: float
    matrix: NDArray[np.complex128]

    def apply(self, psi: WalkState) -> WalkState:
        vector = psi.restrict(self.interval).vector()
        return WalkState.from_vector(self.interval, self.matrix @ vector)

    @property
    def rank(self) -> float:
        """tr Π, the algebraic multiplicity inside the circle."""
        return float(np.trace(self.matrix).real)


def default_radius(lam0: complex, others: Sequence[complex]) -> float:
    """Half the distance from λ₀ to the nearest other pole, 0 included."""
    poles = [0j] + [lam for lam in others if abs(lam - lam0) > 1e-12]
    return 0.5 * min(abs(lam0 - lam) for lam in poles)


def contour_projector(
    coins: CoinSequence,
    interval: IntervalZ,
    lam0: complex,
    radius: float | None = None,
    nodes: int = QUADRATURE_NODES,
    resonances: Sequence[Resonance] | None = None,
) -> ContourProjector:
    """
    Spectral projector of E_J onto the generalized eigenspace of λ₀.

    Args:
        coins: The walk
        interval: J ⊇ chs(C−I₂)
        lam0: A resonance
        radius: Circle radius; defaults to half the distance to the nearest other pole
        nodes: Trapezoid nodes on the circle
        resonances: Precomputed resonances used for the default radius
    """
    lam0 = complex(lam0)
    if radius is None:
        if resonances is None:
            resonances, _ = find_resonances(coins)
        radius = default_radius(lam0, [r.lam for r in resonances])
    e = cutoff_matrix(coins, interval).matrix
    size = e.shape[0]
    identity = np.eye(size, dtype=np.complex128)
    total = np.zeros((size, size), dtype=np.complex128)
    for angle in 2.0 * np.pi * np.arange(nodes) / nodes:
        direction = np.exp(1j * angle)
        lam = lam0 + radius * direction
        total += direction * scipy.linalg.solve(e - lam * identity, identity)
    projector = -(radius / nodes) * total
    logger.debug(
        f"contour projector at {format_complex(lam0)}, radius {radius:.3e}: "
        f"trace {np.trace(projector).real:.6f}"
    )
    return ContourProjector(interval, lam0, float(radius), projector)
