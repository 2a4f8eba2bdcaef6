"""
Polynomial roots by Aberth–Ehrlich simultaneous iteration, plus clustering
of numerically multiple roots.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly
from numpy.typing import ArrayLike, NDArray
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import squareform

from config.globals import (
    CLUSTER_TOL,
    MULTIPLICITY_TOL,
    ROOT_MAX_ITER,
    ROOT_STEP_TOL,
    ZERO_COEFFICIENT_TOL,
)
from tools.errors import DomainError
from tools.logger import get_logger

logger = get_logger(__name__)

_EPS = np.finfo(float).eps
_START_ANGLE = 0.4


class RootFindingError(DomainError):
    """Simultaneous iteration did not converge."""

    def __init__(self, message: str, residuals: NDArray[np.float64]):
        super().__init__(message)
        self.residuals = residuals


def strip_polynomial(
    coeffs: ArrayLike, tol: float = ZERO_COEFFICIENT_TOL
) -> tuple[NDArray[np.complex128], int]:
    """
    Remove negligible top coefficients and factor out the λ^j zero factor.

    Args:
        coeffs: Ascending coefficients
        tol: Coefficients below ``tol`` times the largest one count as zero

    Returns:
        (core coefficients with nonzero constant and leading terms, multiplicity of 0)

    Raises:
        DomainError: For the zero polynomial
    """
    c = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    if scale == 0.0:
        raise DomainError("cannot find roots of the zero polynomial")
    kept = np.flatnonzero(np.abs(c) > tol * scale)
    first, last = int(kept[0]), int(kept[-1])
    return c[first : last + 1], first


def aberth_roots(
    coeffs: ArrayLike,
    max_iter: int = ROOT_MAX_ITER,
    step_tol: float = ROOT_STEP_TOL,
) -> NDArray[np.complex128]:
    """
    All roots of a polynomial whose constant term is nonzero.

    Starting points are equispaced on the circle centred at the root centroid
    with radius |a₀/a_n|^{1/n}. A root is frozen once its Aberth correction drops
    below ``step_tol``·|z| or its residual reaches the rounding level of the
    evaluation; the latter is what stops clusters of multiple roots.

    Args:
        coeffs: Ascending coefficients, nonzero constant and leading terms
        max_iter: Iteration cap
        step_tol: Relative step tolerance

    Returns:
        Array of n roots

    Raises:
        RootFindingError: If some root has not converged after ``max_iter`` sweeps
    """
    core = np.asarray(coeffs, dtype=np.complex128)
    n = core.size - 1
    if n <= 0:
        return np.zeros(0, dtype=np.complex128)
    if n == 1:
        return np.array([-core[0] / core[1]], dtype=np.complex128)

    dcore = npoly.polyder(core)
    abs_core = np.abs(core)
    center = -core[n - 1] / (n * core[n])
    radius = abs(core[0] / core[n]) ** (1.0 / n)
    z = center + radius * np.exp(1j * (2.0 * np.pi * np.arange(n) / n + _START_ANGLE))
    active = np.ones(n, dtype=bool)

    for iteration in range(max_iter):
        p = npoly.polyval(z, core)
        dp = npoly.polyval(z, dcore)
        bound = 8.0 * _EPS * npoly.polyval(np.abs(z), abs_core)
        active &= np.abs(p) > bound
        if not active.any():
            logger.debug(f"Aberth iteration converged after {iteration} sweeps (degree {n})")
            return z
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dp != 0, p / dp, 0.0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inverse = 1.0 / diff
            np.fill_diagonal(inverse, 0.0)
            w = ratio / (1.0 - ratio * inverse.sum(axis=1))
        w = np.where(active & np.isfinite(w), w, 0.0)
        z = z - w
        active &= np.abs(w) > step_tol * np.abs(z) + 1e-300

    if active.any():
        residuals = np.abs(npoly.polyval(z, core))
        raise RootFindingError(
            f"root iteration did not converge after {max_iter} sweeps "
            f"({int(active.sum())} of {n} roots pending, max residual {residuals.max():.3e})",
            residuals,
        )
    return z


def polynomial_roots(coeffs: ArrayLike) -> tuple[NDArray[np.complex128], int]:
    """Nonzero roots and the multiplicity of λ = 0."""
    core, zero_count = strip_polynomial(coeffs)
    return aberth_roots(core), zero_count


def cluster_roots(
    roots: Sequence[complex] | NDArray[np.complex128], tol: float = CLUSTER_TOL
) -> list[NDArray[np.complex128]]:
    """
    Single-linkage groups of roots closer than ``tol``·max(1, |λ|, |μ|).

    Returns:
        List of clusters in order of their first member, each an array of member roots
    """
    z = np.asarray(roots, dtype=np.complex128).reshape(-1)
    if z.size < 2:
        return [z] if z.size else []
    scale = np.maximum(1.0, np.maximum.outer(np.abs(z), np.abs(z)))
    distances = np.abs(z[:, None] - z[None, :]) / scale
    np.fill_diagonal(distances, 0.0)
    tree = linkage(squareform(distances, checks=False), method="single")
    labels = fcluster(tree, tol, criterion="distance")
    order = list(dict.fromkeys(labels.tolist()))
    return [z[labels == label] for label in order]


def taylor_coefficients(coeffs: ArrayLike, lam: complex, order: int) -> NDArray[np.complex128]:
    """Taylor coefficients f^{(j)}(λ)/j!, j = 0..order, of an ascending-coefficient polynomial."""
    c = np.asarray(coeffs, dtype=np.complex128)
    out = np.zeros(order + 1, dtype=np.complex128)
    factorial = 1.0
    for j in range(order + 1):
        if j > 0:
            factorial *= j
            c = npoly.polyder(c) if c.size > 1 else np.zeros(1, dtype=np.complex128)
        out[j] = npoly.polyval(lam, c) / factorial
    return out


def derivative_multiplicity(
    coeffs: ArrayLike,
    lam: complex,
    max_order: int,
    scale: float,
    tol: float = MULTIPLICITY_TOL,
) -> int:
    """
    Smallest j whose scaled Taylor coefficient |f^{(j)}(λ)/j!|·max(1,|λ|)^j
    exceeds ``tol``·scale.
    """
    coefficients = taylor_coefficients(coeffs, lam, max_order)
    rho = max(1.0, abs(lam))
    for j, c in enumerate(coefficients):
        if abs(c) * rho**j > tol * scale:
            return j
    return max_order + 1


def multiset_distance(
    first: Sequence[tuple[complex, int]], second: Sequence[tuple[complex, int]]
) -> float:
    """
    Largest matched distance between two multisets of (λ, multiplicity).

    Multiplicities are expanded and matched by an optimal assignment; multisets
    of different total size are infinitely far apart.
    """
    a = np.array([lam for lam, m in first for _ in range(m)], dtype=np.complex128)
    b = np.array([lam for lam, m in second for _ in range(m)], dtype=np.complex128)
    if a.size != b.size:
        return float("inf")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
