"""
The cut-off matrix E_J = 𝟙_J U 𝟙_J and an eigenvalue oracle independent of σ(λ).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from config.globals import KERNEL_TOL, ORACLE_MAX_SIZE
from resonances.roots import aberth_roots, cluster_roots, strip_polynomial
from tools.errors import DomainError
from tools.logger import get_logger
from walk.coins import CoinSequence
from walk.states import IntervalError, IntervalZ, WalkState

logger = get_logger(__name__)


class OracleSizeError(DomainError):
    """Matrix too large for the characteristic-polynomial oracle."""


@dataclass(frozen=True)
class CutoffMatrix:
    """
    Matrix of 𝟙_J U 𝟙_J in the site-major (L, R) basis of J.

    Row/column 2i is ψ^L(J.lo+i) and 2i+1 is ψ^R(J.lo+i).
    """

    interval: IntervalZ
    matrix: NDArray[np.complex128]

    @property
    def size(self) -> int:
        return int(self.matrix.shape[0])

    def apply(self, psi: WalkState) -> WalkState:
        """E_J applied to 𝟙_J ψ, returned over J."""
        vector = psi.restrict(self.interval).vector()
        return WalkState.from_vector(self.interval, self.matrix @ vector)

    def power(self, n: int) -> NDArray[np.complex128]:
        return np.linalg.matrix_power(self.matrix, n)


def cutoff_matrix(coins: CoinSequence, interval: IntervalZ) -> CutoffMatrix:
    """
    Build E_J for J ⊇ chs(C−I₂).

    Raises:
        IntervalError: If J is empty or does not contain chs(C−I₂)
    """
    if interval.is_empty or not interval.contains_interval(coins.chs):
        raise IntervalError(f"J={interval} must contain chs(C-I2)={coins.chs}")
    n = interval.size
    coin_stack = coins.matrices(interval)
    e = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    for i in range(n):
        if i + 1 < n:
            # (Uψ)^L(x) = c11(x+1)ψ^L(x+1) + c12(x+1)ψ^R(x+1)
            e[2 * i, 2 * (i + 1)] = coin_stack[i + 1, 0, 0]
            e[2 * i, 2 * (i + 1) + 1] = coin_stack[i + 1, 0, 1]
        if i - 1 >= 0:
            # (Uψ)^R(x) = c21(x−1)ψ^L(x−1) + c22(x−1)ψ^R(x−1)
            e[2 * i + 1, 2 * (i - 1)] = coin_stack[i - 1, 1, 0]
            e[2 * i + 1, 2 * (i - 1) + 1] = coin_stack[i - 1, 1, 1]
    return CutoffMatrix(interval, e)


def faddeev_leverrier(matrix: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """
    Ascending coefficients of the monic characteristic polynomial det(λI − A).

    Uses the recursion M_k = A·M_{k−1} + c_{n−k+1}I, c_{n−k} = −tr(A·M_k)/k.
    """
    a = np.asarray(matrix, dtype=np.complex128)
    n = a.shape[0]
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[n] = 1.0
    m = np.zeros_like(a)
    identity = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        m = a @ m + coeffs[n - k + 1] * identity
        coeffs[n - k] = -np.trace(a @ m) / k
    return coeffs


def eigen_oracle(cutoff: CutoffMatrix) -> list[tuple[complex, int]]:
    """
    Eigenvalues of E_J with algebraic multiplicities, λ = 0 included.

    The characteristic polynomial comes from Faddeev–LeVerrier and is rooted
    with the same Aberth iteration as σ(λ), so the two resonance channels share
    nothing but the root finder.

    Raises:
        OracleSizeError: If the matrix is larger than ``ORACLE_MAX_SIZE``
    """
    if cutoff.size > ORACLE_MAX_SIZE:
        raise OracleSizeError(
            f"cut-off matrix of size {cutoff.size} exceeds the oracle limit {ORACLE_MAX_SIZE}"
        )
    coeffs = faddeev_leverrier(cutoff.matrix)
    core, zero_count = strip_polynomial(coeffs, KERNEL_TOL)
    roots = aberth_roots(core)
    eigenvalues = [(complex(np.mean(c)), int(c.size)) for c in cluster_roots(roots)]
    eigenvalues.sort(key=lambda e: (round(float(np.angle(e[0])), 9), round(abs(e[0]), 9)))
    logger.debug(
        f"eigen oracle on J={cutoff.interval}: {len(eigenvalues)} nonzero eigenvalues, "
        f"zero multiplicity {zero_count}"
    )
    if zero_count:
        eigenvalues.insert(0, (0j, zero_count))
    return eigenvalues
