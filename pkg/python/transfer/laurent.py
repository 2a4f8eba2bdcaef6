"""
Exact Laurent-polynomial arithmetic in coefficient space.

A ``LaurentPoly`` is Σ_j coeffs[j]·λ^{low+j}. Products are convolutions, so
no sampling or interpolation is involved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from numpy.typing import ArrayLike, NDArray


@dataclass(frozen=True)
class LaurentPoly:
    """
    Laurent polynomial with complex coefficients.

    Attributes:
        low: Power of λ attached to ``coeffs[0]``
        coeffs: Read-only complex coefficients, ascending powers
    """

    low: int
    coeffs: NDArray[np.complex128]

    def __post_init__(self) -> None:
        c = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "low", int(self.low))

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls(0, np.zeros(0, dtype=np.complex128))

    @classmethod
    def monomial(cls, coefficient: complex, power: int) -> LaurentPoly:
        return cls(power, np.array([coefficient], dtype=np.complex128))

    @property
    def high(self) -> int:
        return self.low + self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def normalized(self) -> LaurentPoly:
        """Strip exactly-zero coefficients at both ends."""
        nonzero = np.flatnonzero(self.coeffs)
        if nonzero.size == 0:
            return LaurentPoly.zero()
        first, last = int(nonzero[0]), int(nonzero[-1])
        return LaurentPoly(self.low + first, self.coeffs[first : last + 1])

    def coefficient(self, power: int) -> complex:
        j = power - self.low
        if 0 <= j < self.coeffs.size:
            return complex(self.coeffs[j])
        return 0j

    def to_array(self, low: int, high: int) -> NDArray[np.complex128]:
        """Coefficients for powers low..high (zero-padded)."""
        out = np.zeros(high - low + 1, dtype=np.complex128)
        for j, c in enumerate(self.coeffs):
            power = self.low + j
            if low <= power <= high:
                out[power - low] = c
            elif c != 0:
                raise ValueError(f"power {power} outside requested range [{low}, {high}]")
        return out

    def shift(self, power: int) -> LaurentPoly:
        """Multiply by λ^power."""
        return LaurentPoly(self.low + power, self.coeffs)

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        low, high = min(self.low, other.low), max(self.high, other.high)
        return LaurentPoly(low, self.to_array(low, high) + other.to_array(low, high))

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(self.low, -self.coeffs)

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly | complex) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            if self.is_zero or other.is_zero:
                return LaurentPoly.zero()
            return LaurentPoly(self.low + other.low, np.convolve(self.coeffs, other.coeffs))
        return LaurentPoly(self.low, self.coeffs * complex(other))

    __rmul__ = __mul__

    def __call__(self, lam: ArrayLike) -> NDArray[np.complex128] | complex:
        z = np.asarray(lam, dtype=np.complex128)
        if self.is_zero:
            value = np.zeros_like(z)
        else:
            value = npoly.polyval(z, self.coeffs) * np.power(z, self.low)
        return complex(value) if value.ndim == 0 else value

    def derivative(self) -> LaurentPoly:
        powers = np.arange(self.low, self.high + 1)
        return LaurentPoly(self.low - 1, self.coeffs * powers)


@dataclass(frozen=True)
class LaurentMatrix:
    """
    2×2 matrix of Laurent polynomials [[t11, t12], [t21, t22]].
    """

    t11: LaurentPoly
    t12: LaurentPoly
    t21: LaurentPoly
    t22: LaurentPoly

    @classmethod
    def identity(cls) -> LaurentMatrix:
        one = LaurentPoly.monomial(1.0, 0)
        return cls(one, LaurentPoly.zero(), LaurentPoly.zero(), one)

    def __matmul__(self, other: LaurentMatrix) -> LaurentMatrix:
        return LaurentMatrix(
            self.t11 * other.t11 + self.t12 * other.t21,
            self.t11 * other.t12 + self.t12 * other.t22,
            self.t21 * other.t11 + self.t22 * other.t21,
            self.t21 * other.t12 + self.t22 * other.t22,
        )

    def det(self) -> LaurentPoly:
        return self.t11 * self.t22 - self.t12 * self.t21

    def __call__(self, lam: complex) -> NDArray[np.complex128]:
        return np.array(
            [[self.t11(lam), self.t12(lam)], [self.t21(lam), self.t22(lam)]],
            dtype=np.complex128,
        )

    def max_coefficient(self) -> float:
        return max(
            (float(np.max(np.abs(p.coeffs))) for p in (self.t11, self.t12, self.t21, self.t22)
             if not p.is_zero),
            default=0.0,
        )
