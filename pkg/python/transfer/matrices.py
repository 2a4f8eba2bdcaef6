"""
Transfer matrices, their Laurent product and the resonance polynomial σ(λ).

For an eigen-solution of (U−λ)ψ = 0 the vector Qψ(x) = (ψ^L(x−1), ψ^R(x))
obeys Qψ(x+1) = T_λ(x)Qψ(x) with

    T_λ(x) = e^{iθ} [[λp, q̄], [q, λ⁻¹p̄]],
    p = e^{−iφ}/|c₁₁|,  q = e^{−iφ}c₂₁/|c₁₁|,
    θ = ½arg(c₂₂/c₁₁),  φ = ½arg(c₁₁c₂₂).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from numpy.polynomial import polynomial as npoly
from numpy.typing import ArrayLike, NDArray

from config.globals import DYNAMIC_RANGE_WARN
from tools.errors import DomainError
from tools.logger import get_logger
from transfer.laurent import LaurentMatrix, LaurentPoly
from walk.coins import Coin, CoinSequence
from walk.states import IntervalZ

logger = get_logger(__name__)


class FreeWalkError(DomainError):
    """The walk has no perturbed site, so there is no transfer product."""


@dataclass(frozen=True)
class TransferParameters:
    """
    Per-site data (p, q, θ, φ) of the transfer matrix.

    |p|² − |q|² = 1 for every admissible unitary coin.
    """

    p: complex
    q: complex
    theta: float
    phi: float

    def matrix(self, lam: complex) -> NDArray[np.complex128]:
        phase = np.exp(1j * self.theta)
        return phase * np.array(
            [[lam * self.p, np.conj(self.q)], [self.q, np.conj(self.p) / lam]],
            dtype=np.complex128,
        )

    def laurent(self) -> LaurentMatrix:
        phase = complex(np.exp(1j * self.theta))
        return LaurentMatrix(
            LaurentPoly.monomial(phase * self.p, 1),
            LaurentPoly.monomial(phase * np.conj(self.q), 0),
            LaurentPoly.monomial(phase * self.q, 0),
            LaurentPoly.monomial(phase * np.conj(self.p), -1),
        )

    def flipped(self) -> TransferParameters:
        """The equivalent representative (−p, −q, θ−π)."""
        return TransferParameters(-self.p, -self.q, self.theta - np.pi, self.phi)


def transfer_parameters(coin: Coin) -> TransferParameters:
    """
    Compute (p, q, θ, φ) for one coin.

    The half-angles from principal arguments fix T_λ(x) only up to an overall
    sign; θ is shifted by π when needed so that T₁₁ = λ/c₁₁ exactly.
    """
    c11, c21, c22 = coin.c11, coin.c21, coin.c22
    theta = 0.5 * float(np.angle(c22 / c11))
    phi = 0.5 * float(np.angle(c11 * c22))
    p = complex(np.exp(-1j * phi) / abs(c11))
    q = complex(np.exp(-1j * phi) * c21 / abs(c11))
    if (np.exp(1j * theta) * p * c11).real < 0:
        theta += np.pi
    return TransferParameters(p, q, theta, phi)


def transfer_at(coin: Coin, lam: complex) -> NDArray[np.complex128]:
    """
    Transfer matrix T_λ across a site carrying ``coin``.

    Args:
        coin: Admissible coin
        lam: Spectral parameter, nonzero

    Returns:
        2×2 complex matrix

    Raises:
        DomainError: If λ = 0
    """
    if lam == 0:
        raise DomainError("transfer matrix is undefined at lambda = 0")
    return transfer_parameters(coin).matrix(complex(lam))


def transfer_inverse_at(coin: Coin, lam: complex) -> NDArray[np.complex128]:
    t = transfer_at(coin, lam)
    det = t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]
    return np.array([[t[1, 1], -t[0, 1]], [-t[1, 0], t[0, 0]]], dtype=np.complex128) / det


def site_parameters(coins: CoinSequence) -> dict[int, TransferParameters]:
    """Transfer parameters for every site of chs(C−I₂), identity sites included."""
    return {x: transfer_parameters(coins.coin_at(x)) for x in coins.chs.sites()}


def transfer_poly_from_parameters(
    parameters: Mapping[int, TransferParameters], chs: IntervalZ
) -> LaurentMatrix:
    """𝕋(λ) = T(x⁺)···T(x⁻) built from explicit per-site parameters."""
    product = LaurentMatrix.identity()
    for x in chs.sites():
        product = parameters[x].laurent() @ product
    return product


def transfer_poly(coins: CoinSequence) -> LaurentMatrix:
    """
    Exact Laurent product 𝕋(λ) = T_λ(x⁺)···T_λ(x⁻).

    Raises:
        FreeWalkError: If the walk has no perturbed site
    """
    if coins.is_free:
        raise FreeWalkError("free walk: no transfer product")
    return transfer_poly_from_parameters(site_parameters(coins), coins.chs)


def transfer_delta(product: LaurentMatrix) -> complex:
    """Δ = det 𝕋, which is independent of λ."""
    det = product.det().normalized()
    delta = det.coefficient(0)
    drift = max(
        (abs(c) for j, c in enumerate(det.coeffs) if det.low + j != 0),
        default=0.0,
    )
    if drift > 1e-10 * max(1.0, abs(delta)):
        logger.warning(f"det of transfer product is not constant (drift {drift:.3e})")
    return delta


@dataclass(frozen=True)
class SigmaPoly:
    """
    σ(λ) = λ^k·(1,0)𝕋(λ)ᵗ(1,0), stored as ascending coefficients.

    Attributes:
        coeffs: Complex coefficients of λ⁰..λ^{2k}
        k: |chs(C−I₂)|_ℤ
        delta: The constant det 𝕋
    """

    coeffs: NDArray[np.complex128]
    k: int
    delta: complex

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=np.complex128)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        nonzero = np.flatnonzero(self.coeffs)
        return int(nonzero[-1]) if nonzero.size else 0

    @property
    def scale(self) -> float:
        """Max-norm of the coefficient vector."""
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    @property
    def dynamic_range(self) -> float:
        magnitudes = np.abs(self.coeffs[self.coeffs != 0])
        return float(magnitudes.max() / magnitudes.min()) if magnitudes.size else 1.0

    def __call__(self, lam: ArrayLike) -> NDArray[np.complex128] | complex:
        value = npoly.polyval(np.asarray(lam, dtype=np.complex128), self.coeffs)
        return complex(value) if np.ndim(value) == 0 else value


def sigma(coins: CoinSequence) -> SigmaPoly:
    """
    Resonance polynomial of degree 2|chs(C−I₂)|_ℤ.

    Raises:
        FreeWalkError: If the walk has no perturbed site
    """
    product = transfer_poly(coins)
    k = coins.k
    poly = SigmaPoly(product.t11.shift(k).to_array(0, 2 * k), k, transfer_delta(product))
    if poly.dynamic_range > DYNAMIC_RANGE_WARN:
        logger.warning(
            f"sigma coefficients span a dynamic range of {poly.dynamic_range:.2e}; "
            "double precision roots may lose accuracy"
        )
    return poly


def incoming_sigma(coins: CoinSequence) -> SigmaPoly:
    """λ^k·t₂₂(λ), whose nonzero roots are the incoming resonances."""
    product = transfer_poly(coins)
    k = coins.k
    return SigmaPoly(product.t22.shift(k).to_array(0, 2 * k), k, transfer_delta(product))
