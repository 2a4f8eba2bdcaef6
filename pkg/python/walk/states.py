"""
Integer intervals and finitely supported walk states.

States are dense complex arrays over an explicit window [lo, hi]; column 0
holds ψ^L and column 1 holds ψ^R.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from numpy.typing import NDArray

from tools.errors import DomainError


class IntervalError(DomainError):
    """Malformed interval or an interval that violates a containment requirement."""


@dataclass(frozen=True)
class IntervalZ:
    """
    Integer interval [lo, hi]; any lo > hi is the empty interval.

    Attributes:
        lo: Left end (inclusive)
        hi: Right end (inclusive)
    """

    lo: int
    hi: int

    @classmethod
    def empty(cls) -> IntervalZ:
        return cls(0, -1)

    @classmethod
    def parse(cls, text: str) -> IntervalZ:
        """
        Parse ``"a,b"`` into [a, b].

        Raises:
            IntervalError: If the text is not two integers with a <= b
        """
        parts = [p.strip() for p in str(text).split(",")]
        if len(parts) != 2:
            raise IntervalError(f"interval must look like 'a,b', got {text!r}")
        try:
            lo, hi = int(parts[0]), int(parts[1])
        except ValueError as e:
            raise IntervalError(f"interval bounds must be integers, got {text!r}") from e
        if lo > hi:
            raise IntervalError(f"interval {text!r} has lo > hi")
        return cls(lo, hi)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @property
    def size(self) -> int:
        """|J|_ℤ"""
        return 0 if self.is_empty else self.hi - self.lo + 1

    def contains(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: IntervalZ) -> bool:
        if other.is_empty:
            return True
        return not self.is_empty and self.lo <= other.lo and other.hi <= self.hi

    def neighborhood(self, r: int) -> IntervalZ:
        """N_r(J) = [lo−r, hi+r]."""
        if r < 0:
            raise IntervalError(f"neighborhood radius must be non-negative, got {r}")
        if self.is_empty:
            return self
        return IntervalZ(self.lo - r, self.hi + r)

    def hull(self, other: IntervalZ) -> IntervalZ:
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return IntervalZ(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: IntervalZ) -> IntervalZ:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return IntervalZ(lo, hi) if lo <= hi else IntervalZ.empty()

    def sites(self) -> range:
        return range(self.lo, self.hi + 1) if not self.is_empty else range(0)

    def __str__(self) -> str:
        return "[]" if self.is_empty else f"[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class WalkState:
    """
    Finitely supported state x ↦ (ψ^L(x), ψ^R(x)).

    Attributes:
        lo: Left end of the window
        amplitudes: Read-only complex array of shape (n, 2) for sites lo..lo+n−1
    """

    lo: int
    amplitudes: NDArray[np.complex128]

    def __post_init__(self) -> None:
        a = np.array(self.amplitudes, dtype=np.complex128)
        if a.ndim != 2 or a.shape[1] != 2:
            raise DomainError(f"amplitudes must have shape (n, 2), got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "lo", int(self.lo))

    @classmethod
    def zeros(cls, window: IntervalZ) -> WalkState:
        return cls(window.lo, np.zeros((window.size, 2), dtype=np.complex128))

    @classmethod
    def from_sites(cls, values: Mapping[int, Sequence[complex]]) -> WalkState:
        """Build a state from ``{x: (ψ^L(x), ψ^R(x))}``."""
        if not values:
            return cls(0, np.zeros((1, 2), dtype=np.complex128))
        lo, hi = min(values), max(values)
        a = np.zeros((hi - lo + 1, 2), dtype=np.complex128)
        for x, (left, right) in values.items():
            a[x - lo] = (left, right)
        return cls(lo, a)

    @classmethod
    def from_vector(cls, window: IntervalZ, vector: NDArray[np.complex128]) -> WalkState:
        """Inverse of :meth:`vector`: site-major (L, R) ordering."""
        return cls(window.lo, np.asarray(vector, dtype=np.complex128).reshape(window.size, 2))

    @property
    def hi(self) -> int:
        return self.lo + self.amplitudes.shape[0] - 1

    @property
    def window(self) -> IntervalZ:
        return IntervalZ(self.lo, self.hi)

    @property
    def left(self) -> NDArray[np.complex128]:
        return self.amplitudes[:, 0]

    @property
    def right(self) -> NDArray[np.complex128]:
        return self.amplitudes[:, 1]

    def at(self, x: int) -> NDArray[np.complex128]:
        if self.lo <= x <= self.hi:
            return self.amplitudes[x - self.lo].copy()
        return np.zeros(2, dtype=np.complex128)

    def on(self, window: IntervalZ) -> WalkState:
        """Values of ψ over ``window`` (zero-filled outside the stored window)."""
        out = np.zeros((window.size, 2), dtype=np.complex128)
        common = self.window.intersect(window)
        if not common.is_empty:
            out[common.lo - window.lo : common.hi - window.lo + 1] = self.amplitudes[
                common.lo - self.lo : common.hi - self.lo + 1
            ]
        return WalkState(window.lo, out)

    def embed(self, window: IntervalZ) -> WalkState:
        """Re-store ψ over a window containing its support."""
        if not window.contains_interval(self.support()):
            raise IntervalError(f"window {window} does not contain supp psi = {self.support()}")
        return self.on(window)

    def restrict(self, interval: IntervalZ) -> WalkState:
        """𝟙_J ψ, stored over J."""
        return self.on(interval)

    def vector(self) -> NDArray[np.complex128]:
        return self.amplitudes.reshape(-1).copy()

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq()))

    def site_norms_sq(self) -> NDArray[np.float64]:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def support(self) -> IntervalZ:
        """Smallest interval holding every nonzero amplitude."""
        nonzero = np.flatnonzero(np.any(self.amplitudes != 0, axis=1))
        if nonzero.size == 0:
            return IntervalZ.empty()
        return IntervalZ(self.lo + int(nonzero[0]), self.lo + int(nonzero[-1]))

    def scaled(self, factor: complex) -> WalkState:
        return WalkState(self.lo, self.amplitudes * factor)

    def normalized(self) -> WalkState:
        norm = self.norm()
        if norm == 0.0:
            raise DomainError("cannot normalize the zero state")
        return self.scaled(1.0 / norm)

    def conj(self) -> WalkState:
        return WalkState(self.lo, self.amplitudes.conj())

    def __add__(self, other: WalkState) -> WalkState:
        window = self.window.hull(other.window)
        return WalkState(window.lo, self.on(window).amplitudes + other.on(window).amplitudes)

    def __sub__(self, other: WalkState) -> WalkState:
        return self + other.scaled(-1.0)

    def max_abs_diff(self, other: WalkState, window: IntervalZ | None = None) -> float:
        window = window if window is not None else self.window.hull(other.window)
        diff = self.on(window).amplitudes - other.on(window).amplitudes
        return float(np.max(np.abs(diff))) if diff.size else 0.0

    def items(self) -> Iterable[tuple[int, NDArray[np.complex128]]]:
        for offset, value in enumerate(self.amplitudes):
            yield self.lo + offset, value


def psi_left(lam: complex, window: IntervalZ) -> WalkState:
    """Far-field generator Ψ_L(λ, x) = (λ^x, 0) over ``window``."""
    x = np.arange(window.lo, window.hi + 1)
    a = np.zeros((window.size, 2), dtype=np.complex128)
    a[:, 0] = np.power(complex(lam), x.astype(float))
    return WalkState(window.lo, a)


def psi_right(lam: complex, window: IntervalZ) -> WalkState:
    """Far-field generator Ψ_R(λ, x) = (0, λ^{−x}) over ``window``."""
    x = np.arange(window.lo, window.hi + 1)
    a = np.zeros((window.size, 2), dtype=np.complex128)
    a[:, 1] = np.power(complex(lam), -x.astype(float))
    return WalkState(window.lo, a)


def q_transform(psi: WalkState, x: int) -> NDArray[np.complex128]:
    """Qψ(x) = (ψ^L(x−1), ψ^R(x))."""
    return np.array([psi.at(x - 1)[0], psi.at(x)[1]], dtype=np.complex128)


def incoming_support(psi: WalkState) -> IntervalZ:
    """
    supp♭ψ = [inf supp ψ^R, sup supp ψ^L].

    A component with no nonzero amplitude leaves that side unbounded, which is
    reported by truncating to the stored window.

    Examples:
        >>> incoming_support(WalkState.from_sites({0: (1, 0), 3: (0, 0)}))
        IntervalZ(lo=0, hi=0)
    """
    right_sites = np.flatnonzero(psi.right != 0)
    left_sites = np.flatnonzero(psi.left != 0)
    if right_sites.size == 0 and left_sites.size == 0:
        return IntervalZ.empty()
    lo = psi.lo + int(right_sites[0]) if right_sites.size else psi.lo
    hi = psi.lo + int(left_sites[-1]) if left_sites.size else psi.hi
    return IntervalZ(lo, hi) if lo <= hi else IntervalZ.empty()
