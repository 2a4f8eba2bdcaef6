"""Scattering matrix built from the transfer product."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from config.globals import POLE_TOL, QUADRATURE_NODES
from tools.errors import DomainError
from transfer.matrices import sigma, transfer_delta, transfer_poly
from walk.coins import CoinSequence


class ScatteringPoleError(DomainError):
    """t₁₁(λ) vanishes: λ is a pole of S, i.e. a resonance."""

    def __init__(self, lam: complex, t11: complex):
        super().__init__(f"scattering matrix has a pole at lambda={lam} (|t11|={abs(t11):.3e})")
        self.lam = lam
        self.t11 = t11


@dataclass(frozen=True)
class ScatteringMatrix:
    """
    S(λ) = (1/t₁₁)[[1, −t₁₂], [t₂₁, Δ]] together with its position phases.

    The full position-dependent form is ``phase_left @ ... @ phase_right`` with
    phase_left = diag(λ^{−(x⁻−1)}, λ^{x⁺+1}) and phase_right = diag(λ^{x⁺}, λ^{−x⁻});
    both are kept separately from the reduced matrix.
    """

    lam: complex
    t11: complex
    t12: complex
    t21: complex
    delta: complex
    phase_left: NDArray[np.complex128]
    phase_right: NDArray[np.complex128]

    @property
    def matrix(self) -> NDArray[np.complex128]:
        return np.array([[1.0, -self.t12], [self.t21, self.delta]], dtype=np.complex128) / self.t11

    def trace(self) -> complex:
        return complex((1.0 + self.delta) / self.t11)

    def unitarity_defect(self) -> float:
        s = self.matrix
        return float(np.max(np.abs(s.conj().T @ s - np.eye(2))))


def scattering_matrix(coins: CoinSequence, lam: complex) -> ScatteringMatrix:
    """
    Evaluate the scattering matrix at λ.

    Raises:
        DomainError: If λ = 0
        ScatteringPoleError: If t₁₁(λ) vanishes
    """
    if lam == 0:
        raise DomainError("scattering matrix is undefined at lambda = 0")
    lam = complex(lam)
    product = transfer_poly(coins)
    t = product(lam)
    if abs(t[0, 0]) <= POLE_TOL * max(1.0, abs(t[0, 1]), abs(t[1, 0])):
        raise ScatteringPoleError(lam, complex(t[0, 0]))
    chs = coins.chs
    return ScatteringMatrix(
        lam=lam,
        t11=complex(t[0, 0]),
        t12=complex(t[0, 1]),
        t21=complex(t[1, 0]),
        delta=transfer_delta(product),
        phase_left=np.diag([lam ** (-(chs.lo - 1)), lam ** (chs.hi + 1)]),
        phase_right=np.diag([lam**chs.hi, lam ** (-chs.lo)]),
    )


def resonance_multiplicity_from_trace(
    coins: CoinSequence, lam0: complex, radius: float, nodes: int = QUADRATURE_NODES
) -> float:
    """
    Order of the pole of tr S inside a small circle, by the argument principle.

    tr S = (1+Δ)·λ^k/σ(λ), so for Δ ≠ −1 and a circle avoiding 0 the count is
    (2πi)⁻¹∮ σ′/σ dλ. The raw (real part of the) value is returned; it is close to
    an integer when the circle avoids every other zero.
    """
    poly = sigma(coins)
    dcoeffs = np.polynomial.polynomial.polyder(np.array(poly.coeffs))
    angles = 2.0 * np.pi * np.arange(nodes) / nodes
    points = lam0 + radius * np.exp(1j * angles)
    values = np.polynomial.polynomial.polyval(points, poly.coeffs)
    derivs = np.polynomial.polynomial.polyval(points, dcoeffs)
    integral = np.sum(derivs / values * 1j * radius * np.exp(1j * angles)) * (2.0 * np.pi / nodes)
    return float((integral / (2j * np.pi)).real)
