"""
The group structure behind transfer matrices.

Every admissible coin C corresponds to a matrix

    ℳ⁻¹(C) = e^{iθ}[[p, q̄], [q, p̄]],   |p|² − |q|² = 1,

which is the transfer matrix of C at λ = 1. Such matrices form a group under
the matrix product, and the product of coins is defined through it:
C₁ * C₂ = ℳ(ℳ⁻¹(C₁)ℳ⁻¹(C₂)). Both maps are the involution

    X ↦ X₁₁⁻¹ [[1, −X₁₂], [X₂₁, det X]].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import overload

import numpy as np
from numpy.typing import NDArray

from config.globals import ADMISSIBLE_TOL
from tools.errors import DomainError
from walk.coins import Coin

HYPERBOLIC_TOL = 1e-10


class OutsideGroupError(DomainError):
    """The matrix has a vanishing (1,1) entry, so it is outside the coin group."""


def _involution(matrix: NDArray[np.complex128]) -> NDArray[np.complex128]:
    x = np.asarray(matrix, dtype=np.complex128)
    if abs(x[0, 0]) <= ADMISSIBLE_TOL:
        raise OutsideGroupError(f"(1,1) entry of modulus {abs(x[0, 0]):.3e} leaves the coin group")
    det = x[0, 0] * x[1, 1] - x[0, 1] * x[1, 0]
    return np.array([[1.0, -x[0, 1]], [x[1, 0], det]], dtype=np.complex128) / x[0, 0]


@dataclass(frozen=True)
class GroupElement:
    """
    (p, q, θ) with |p|² − |q|² = 1 and θ ∈ [0, π).

    (p, q, θ) and (−p, −q, θ − π) give the same matrix; the constructor
    normalizes to the representative with θ ∈ [0, π).
    """

    p: complex
    q: complex
    theta: float

    def __post_init__(self) -> None:
        p, q, theta = complex(self.p), complex(self.q), float(self.theta)
        defect = abs(abs(p) ** 2 - abs(q) ** 2 - 1.0)
        if defect > HYPERBOLIC_TOL * max(1.0, abs(p) ** 2):
            raise OutsideGroupError(f"|p|^2 - |q|^2 = 1 fails by {defect:.3e}")
        turns = int(np.floor(theta / np.pi))
        theta -= turns * np.pi
        if turns % 2:
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def identity(cls) -> GroupElement:
        return cls(1.0, 0.0, 0.0)

    @classmethod
    def from_transfer(cls, matrix: NDArray[np.complex128]) -> GroupElement:
        """Read (p, q, θ) off e^{iθ}[[p, q̄], [q, p̄]]; θ = ½ arg det."""
        t = np.asarray(matrix, dtype=np.complex128)
        theta = 0.5 * float(np.angle(t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]))
        phase = np.exp(-1j * theta)
        return cls(complex(t[0, 0] * phase), complex(t[1, 0] * phase), theta)

    @property
    def transfer(self) -> NDArray[np.complex128]:
        """ℳ⁻¹ image e^{iθ}[[p, q̄], [q, p̄]]."""
        return np.exp(1j * self.theta) * np.array(
            [[self.p, np.conj(self.q)], [self.q, np.conj(self.p)]], dtype=np.complex128
        )

    @property
    def coin(self) -> Coin:
        """ℳ image p⁻¹[[e^{−iθ}, −q̄], [q, e^{iθ}]]."""
        return Coin(_involution(self.transfer))

    def __mul__(self, other: GroupElement) -> GroupElement:
        return GroupElement.from_transfer(self.transfer @ other.transfer)


def to_group(coin: Coin) -> GroupElement:
    """ℳ⁻¹ for a coin."""
    return GroupElement.from_transfer(_involution(coin.matrix))


def from_group(element: GroupElement) -> Coin:
    """ℳ for a group element."""
    return element.coin


@overload
def group_product(a: Coin, b: Coin) -> Coin: ...


@overload
def group_product(a: GroupElement, b: GroupElement) -> GroupElement: ...


def group_product(a: Coin | GroupElement, b: Coin | GroupElement) -> Coin | GroupElement:
    """
    a * b, returned in the type of the arguments.

    Raises:
        OutsideGroupError: If a product leaves the coin group (vanishing (1,1) entry)
    """
    if isinstance(a, GroupElement) and isinstance(b, GroupElement):
        return a * b
    if isinstance(a, Coin) and isinstance(b, Coin):
        return Coin(_involution(_involution(a.matrix) @ _involution(b.matrix)))
    raise DomainError(
        f"group_product needs two coins or two group elements, got {type(a)}, {type(b)}"
    )
