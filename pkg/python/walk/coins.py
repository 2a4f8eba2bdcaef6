"""
Coins and coin sequences of a finitely perturbed walk on the integer lattice.

A coin is a 2×2 unitary acting on the (L, R) components of one site.
A ``CoinSequence`` stores the finitely many sites whose coin differs from
the identity; every other site implicitly carries I₂.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterator, Mapping

import numpy as np
from numpy.typing import NDArray

from config.globals import ADMISSIBLE_TOL, RANDOM_COIN_MIN_DIAGONAL, UNITARY_TOL
from tools.errors import DomainError
from walk.states import IntervalZ

IDENTITY = np.eye(2, dtype=np.complex128)


class InadmissibleCoinError(DomainError):
    """A coin is not unitary or has a vanishing diagonal entry."""

    def __init__(self, message: str, site: int | None = None):
        super().__init__(message)
        self.site = site


@dataclass(frozen=True)
class Coin:
    """
    Admissible 2×2 unitary coin.

    Admissibility requires |c₁₁| and |c₂₂| to stay above ``ADMISSIBLE_TOL``;
    the transfer-matrix description of the walk divides by c₁₁.

    Attributes:
        matrix: Read-only complex128 array of shape (2, 2)
    """

    matrix: NDArray[np.complex128]

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise InadmissibleCoinError(f"coin must be 2x2, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InadmissibleCoinError("coin entries must be finite")
        defect = np.max(np.abs(m.conj().T @ m - IDENTITY))
        if defect > UNITARY_TOL:
            raise InadmissibleCoinError(f"coin is not unitary (|C*C - I| = {defect:.3e})")
        if abs(m[0, 0]) <= ADMISSIBLE_TOL or abs(m[1, 1]) <= ADMISSIBLE_TOL:
            raise InadmissibleCoinError(
                "coin violates the admissibility assumption: diagonal entries c11, c22 "
                f"must not vanish (|c11|={abs(m[0, 0]):.3e}, |c22|={abs(m[1, 1]):.3e})"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def rotation(cls, r: float) -> Coin:
        """
        Real rotation coin [[√(1−r²), r], [−r, √(1−r²)]].

        Args:
            r: Reflection amplitude, −1 < r < 1

        Raises:
            InadmissibleCoinError: If |r| >= 1
        """
        if not -1.0 < r < 1.0:
            raise InadmissibleCoinError(
                f"rotation amplitude r={r} violates the admissibility assumption (need -1 < r < 1)"
            )
        s = np.sqrt(1.0 - r * r)
        return cls(np.array([[s, r], [-r, s]], dtype=np.complex128))

    @classmethod
    def diagonal(cls, alpha: float, beta: float | None = None) -> Coin:
        """Diagonal coin diag(e^{iα}, e^{iβ}); β defaults to −α."""
        beta = -alpha if beta is None else beta
        return cls(np.diag([np.exp(1j * alpha), np.exp(1j * beta)]).astype(np.complex128))

    @classmethod
    def random(cls, rng: np.random.Generator) -> Coin:
        """
        Haar-random admissible coin.

        QR of a complex Ginibre matrix with the phase fix that makes the
        distribution Haar; draws with |c₁₁| below ``RANDOM_COIN_MIN_DIAGONAL`` are
        rejected.
        """
        while True:
            z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / np.sqrt(2.0)
            q, r = np.linalg.qr(z)
            d = np.diag(r)
            q = q * (d / np.abs(d))
            if abs(q[0, 0]) >= RANDOM_COIN_MIN_DIAGONAL:
                return cls(q.astype(np.complex128))

    @property
    def c11(self) -> complex:
        return complex(self.matrix[0, 0])

    @property
    def c12(self) -> complex:
        return complex(self.matrix[0, 1])

    @property
    def c21(self) -> complex:
        return complex(self.matrix[1, 0])

    @property
    def c22(self) -> complex:
        return complex(self.matrix[1, 1])

    @property
    def det(self) -> complex:
        return complex(self.c11 * self.c22 - self.c12 * self.c21)

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, IDENTITY))

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.matrix.imag == 0.0))

    def conj(self) -> Coin:
        return Coin(self.matrix.conj())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Coin):
            return NotImplemented
        return bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self) -> int:
        return hash(self.matrix.tobytes())


IDENTITY_COIN = Coin(IDENTITY)


@dataclass(frozen=True)
class CoinSequence:
    """
    Finitely supported perturbation x ↦ C(x) of the free walk.

    Identity coins passed in are dropped, so ``support`` is exactly supp(C−I₂).

    Attributes:
        coins: Read-only mapping site → Coin over the non-identity sites
    """

    coins: Mapping[int, Coin] = field(default_factory=dict)

    def __post_init__(self) -> None:
        stored: dict[int, Coin] = {}
        for site, coin in sorted(self.coins.items()):
            if not isinstance(coin, Coin):
                raise InadmissibleCoinError(f"site {site}: expected Coin, got {type(coin)}", site)
            if not coin.is_identity:
                stored[int(site)] = coin
        object.__setattr__(self, "coins", MappingProxyType(stored))

    @classmethod
    def free(cls) -> CoinSequence:
        return cls({})

    @classmethod
    def from_matrices(cls, matrices: Mapping[int, NDArray[np.complex128]]) -> CoinSequence:
        """
        Build a sequence from raw matrices, tagging admissibility errors with the site.

        Raises:
            InadmissibleCoinError: If any matrix is not an admissible coin
        """
        coins: dict[int, Coin] = {}
        for site, matrix in matrices.items():
            try:
                coins[site] = Coin(np.asarray(matrix, dtype=np.complex128))
            except InadmissibleCoinError as e:
                raise InadmissibleCoinError(f"coin at x={site}: {e}", site) from e
        return cls(coins)

    def coin_at(self, x: int) -> Coin:
        return self.coins.get(x, IDENTITY_COIN)

    def matrix_at(self, x: int) -> NDArray[np.complex128]:
        return self.coin_at(x).matrix

    def matrices(self, window: IntervalZ) -> NDArray[np.complex128]:
        """Stack of coin matrices over ``window``, shape (|window|, 2, 2)."""
        out = np.broadcast_to(IDENTITY, (window.size, 2, 2)).copy()
        for site, coin in self.coins.items():
            if window.contains(site):
                out[site - window.lo] = coin.matrix
        return out

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self.coins.keys())

    @property
    def is_free(self) -> bool:
        return not self.coins

    @property
    def chs(self) -> IntervalZ:
        """Convex hull [x⁻, x⁺] of the support (empty for the free walk)."""
        if self.is_free:
            return IntervalZ.empty()
        return IntervalZ(min(self.coins), max(self.coins))

    @property
    def k(self) -> int:
        """|chs(C−I₂)|_ℤ, the number of lattice sites in the convex hull."""
        return self.chs.size

    @property
    def is_real(self) -> bool:
        return all(coin.is_real for coin in self.coins.values())

    def with_coin(self, x: int, coin: Coin) -> CoinSequence:
        updated = dict(self.coins)
        updated[x] = coin
        return CoinSequence(updated)

    def conj(self) -> CoinSequence:
        return CoinSequence({x: c.conj() for x, c in self.coins.items()})

    def __iter__(self) -> Iterator[tuple[int, Coin]]:
        return iter(self.coins.items())

    def __len__(self) -> int:
        return len(self.coins)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoinSequence):
            return NotImplemented
        return dict(self.coins) == dict(other.coins)

    def __hash__(self) -> int:
        return hash(tuple(self.coins.items()))
