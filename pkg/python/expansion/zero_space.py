"""
The generalized kernel V_J(0) of the cut-off matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from config.globals import KERNEL_TOL
from resonances.cutoff import CutoffMatrix, cutoff_matrix
from tools.logger import get_logger
from walk.coins import CoinSequence
from walk.states import IntervalZ, WalkState

logger = get_logger(__name__)


@dataclass(frozen=True)
class ZeroSpace:
    """
    Orthonormal basis of V_J(0) in the site-major (L, R) basis of J.

    Attributes:
        interval: J
        basis: Array of shape (2|J|, d) with orthonormal columns
        index: Smallest j with ker E_J^j = ker E_J^{j+1}
    """

    interval: IntervalZ
    basis: NDArray[np.complex128]
    index: int

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[1])

    def states(self) -> list[WalkState]:
        return [
            WalkState.from_vector(self.interval, self.basis[:, j]) for j in range(self.dimension)
        ]

    def distance(self, psi: WalkState) -> float:
        """‖ψ − Pψ‖ for the orthogonal projection P onto V_J(0)."""
        v = psi.restrict(self.interval).vector()
        return float(np.linalg.norm(v - self.basis @ (self.basis.conj().T @ v)))

    def contains(self, psi: WalkState, tol: float = 1e-8) -> bool:
        return self.distance(psi) <= tol * max(psi.norm(), 1e-300)


def _kernel_chain(cutoff: CutoffMatrix, tol: float) -> tuple[NDArray[np.complex128], int]:
    """
    Grow K_{j+1} = {v : E v ∈ K_j} from K_0 = {0} until the dimension stabilizes.

    Each step is a kernel computation for [E, −K_j], so the rank threshold acts
    on E itself and never on a high power of it.
    """
    e = cutoff.matrix
    n = e.shape[0]
    kernel = np.zeros((n, 0), dtype=np.complex128)
    for step in range(1, n + 2):
        stacked = np.hstack([e, -kernel])
        null = scipy.linalg.null_space(stacked, rcond=tol)
        grown = scipy.linalg.orth(null[:n], rcond=tol) if null.size else null[:n]
        if grown.shape[1] <= kernel.shape[1]:
            return kernel, step - 1
        kernel = grown
    return kernel, n + 1


def zero_space(coins: CoinSequence, interval: IntervalZ, tol: float = KERNEL_TOL) -> ZeroSpace:
    """
    V_J(0): the states that leave J for good after at most 2|J|_ℤ steps.

    Raises:
        IntervalError: If J does not contain chs(C−I₂)
    """
    cutoff = cutoff_matrix(coins, interval)
    basis, index = _kernel_chain(cutoff, tol)
    logger.debug(f"V_J(0) on J={interval}: dimension {basis.shape[1]}, index {index}")
    if basis.shape[1] < 2:
        logger.warning(f"V_J(0) on J={interval} has dimension {basis.shape[1]} < 2")
    return ZeroSpace(interval, basis, index)


def boundary_witnesses(coins: CoinSequence, interval: IntervalZ) -> tuple[WalkState, WalkState]:
    """
    Two independent members of V_J(0) built from the kernels of
    C⁻ = diag(0,1)C(x⁻) and C⁺ = diag(1,0)C(x⁺).

    A state at x⁺ in ker C⁺ only moves right after one step and a state at x⁻ in
    ker C⁻ only moves left, so both leave any J ⊇ chs(C−I₂).
    """
    chs = coins.chs if not coins.is_free else IntervalZ(interval.lo, interval.lo)
    left_coin, right_coin = coins.coin_at(chs.lo), coins.coin_at(chs.hi)
    minus = WalkState.from_sites({chs.lo: (left_coin.c22, -left_coin.c21)})
    plus = WalkState.from_sites({chs.hi: (right_coin.c12, -right_coin.c11)})
    return minus.on(interval), plus.on(interval)
