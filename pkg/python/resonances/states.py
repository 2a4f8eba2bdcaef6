"""
Resonant states and Jordan chains from Taylor jets of the transfer product.

φ_λ is fixed by Qφ_λ(x⁻) = e₁ and propagated with T_λ(x) to the right and
T_λ(x)⁻¹ to the left. Truncated jets in (λ−λ₀) give the whole chain at once:
φ_{λ₀,l+1} is the l-th Taylor coefficient of λ ↦ φ_λ.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from config.globals import CHAIN_RESIDUAL_TOL, RESIDUAL_TOL
from resonances.solver import Resonance, polynomial_residual
from tools.errors import DomainError
from tools.logger import get_logger
from tools.utils import format_complex
from transfer.matrices import TransferParameters, sigma, transfer_at, transfer_parameters
from walk.coins import CoinSequence
from walk.evolution import apply_U
from walk.states import IntervalZ, WalkState, incoming_support, q_transform

logger = get_logger(__name__)


class NotAResonanceError(DomainError):
    """σ(λ) is not small enough for λ to be a resonance."""

    def __init__(self, lam: complex, residual: float):
        super().__init__(
            f"not a resonance: lambda={format_complex(lam)} has sigma residual {residual:.3e}"
        )
        self.lam = lam
        self.residual = residual


class ChainResidualError(DomainError):
    """A Jordan chain member violates (U−λ)φ_k = φ_{k−1}."""

    def __init__(self, message: str, residuals: NDArray[np.float64]):
        super().__init__(message)
        self.residuals = residuals


def _scalar_jets(lam: complex, order: int) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """Taylor jets of λ and 1/λ at λ₀ = ``lam``."""
    up = np.zeros(order, dtype=np.complex128)
    up[0] = lam
    if order > 1:
        up[1] = 1.0
    j = np.arange(order)
    down = (-1.0) ** j / lam ** (j + 1)
    return up, down.astype(np.complex128)


def _matrix_jet(params: TransferParameters, lam: complex, order: int) -> NDArray[np.complex128]:
    up, down = _scalar_jets(lam, order)
    jet = np.zeros((order, 2, 2), dtype=np.complex128)
    phase = np.exp(1j * params.theta)
    jet[:, 0, 0] = phase * params.p * up
    jet[:, 1, 1] = phase * np.conj(params.p) * down
    jet[0, 0, 1] = phase * np.conj(params.q)
    jet[0, 1, 0] = phase * params.q
    return jet


def _apply_jet(
    matrix: NDArray[np.complex128], vector: NDArray[np.complex128]
) -> NDArray[np.complex128]:
    """Truncated product of a matrix jet (m, 2, 2) and a vector jet (m, 2)."""
    order = vector.shape[0]
    out = np.zeros_like(vector)
    for j in range(order):
        for i in range(j + 1):
            out[j] += matrix[i] @ vector[j - i]
    return out


def _q_jets(
    coins: CoinSequence, lam: complex, order: int, sites: IntervalZ
) -> dict[int, NDArray[np.complex128]]:
    """
    Jets of Qφ_λ(x) for x in ``sites`` ∪ [x⁻, x⁺+1], truncated at ``order`` terms.

    The L component is set to zero from x⁺+1 on; its discarded jet is the
    Taylor expansion of t₁₁ at λ₀, which vanishes to order m(λ₀).
    """
    chs = coins.chs
    lo, hi = min(sites.lo, chs.lo), max(sites.hi, chs.hi + 1)
    up, down = _scalar_jets(lam, order)
    free = np.zeros((order, 2, 2), dtype=np.complex128)
    free[:, 0, 0], free[:, 1, 1] = up, down
    free_inverse = np.zeros((order, 2, 2), dtype=np.complex128)
    free_inverse[:, 0, 0], free_inverse[:, 1, 1] = down, up

    jets: dict[int, NDArray[np.complex128]] = {}
    start = np.zeros((order, 2), dtype=np.complex128)
    start[0, 0] = 1.0
    jets[chs.lo] = start
    for x in chs.sites():
        params = transfer_parameters(coins.coin_at(x))
        jets[x + 1] = _apply_jet(_matrix_jet(params, lam, order), jets[x])

    edge = jets[chs.hi + 1]
    discarded = float(np.max(np.abs(edge[:, 0])))
    logger.debug(f"discarded t11 jet at {format_complex(lam)}: {discarded:.3e}")
    edge = edge.copy()
    edge[:, 0] = 0.0
    jets[chs.hi + 1] = edge

    for x in range(chs.hi + 1, hi):
        jets[x + 1] = _apply_jet(free, jets[x])
    for x in range(chs.lo - 1, lo - 1, -1):
        jets[x] = _apply_jet(free_inverse, jets[x + 1])
    return jets


@lru_cache(maxsize=256)
def _chain_arrays(
    coins: CoinSequence, lam: complex, order: int, lo: int, hi: int
) -> NDArray[np.complex128]:
    """Chain amplitudes over [lo, hi] as an array (order, n, 2)."""
    window = IntervalZ(lo, hi)
    jets = _q_jets(coins, lam, order, IntervalZ(lo, hi + 1))
    out = np.zeros((order, window.size, 2), dtype=np.complex128)
    for offset, x in enumerate(window.sites()):
        out[:, offset, 0] = jets[x + 1][:, 0]
        out[:, offset, 1] = jets[x][:, 1]
    out.setflags(write=False)
    return out


def default_window(coins: CoinSequence, margin: int = 2) -> IntervalZ:
    return coins.chs.neighborhood(margin)


def eigen_residual(
    coins: CoinSequence, lam: complex, state: WalkState, previous: WalkState | None = None
) -> float:
    """
    max_x ‖(Uφ − λφ − φ_prev)(x)‖ / ‖φ‖ over the interior of the state's window.

    (Uφ)(x) depends on φ(x±1) only, so sites strictly inside the window are exact.
    """
    window = state.window
    if window.size < 3:
        raise DomainError(f"window {window} too small for an interior residual")
    interior = IntervalZ(window.lo + 1, window.hi - 1)
    lhs = apply_U(coins, state).on(interior)
    rhs = state.on(interior).scaled(lam)
    if previous is not None:
        rhs = rhs + previous.on(interior)
    norm = state.norm()
    return lhs.max_abs_diff(rhs, interior) / norm if norm > 0 else 0.0


@dataclass(frozen=True)
class ResonantState:
    """
    Outgoing solution of (U−λ)φ = 0, normalized by Qφ(x⁻) = e₁.

    Attributes:
        coins: The walk
        lam: The resonance
        c_minus: c₋♯, with φ(x) = c₋♯Ψ_L(λ, x) for x < x⁻
        c_plus: c₊♯, with φ(x) = c₊♯Ψ_R(λ, x) for x > x⁺
    """

    coins: CoinSequence
    lam: complex
    c_minus: complex
    c_plus: complex

    def evaluate(self, window: IntervalZ) -> WalkState:
        arrays = _chain_arrays(self.coins, self.lam, 1, window.lo, window.hi)
        return WalkState(window.lo, arrays[0])

    def restricted(self, interval: IntervalZ) -> WalkState:
        """𝟙_J φ_λ."""
        return self.evaluate(interval)

    def far_field(self, x: int) -> NDArray[np.complex128]:
        """c₋♯Ψ_L(λ,x) left of chs, c₊♯Ψ_R(λ,x) right of it, zero on chs."""
        chs = self.coins.chs
        if x < chs.lo:
            return np.array([self.c_minus * self.lam**x, 0.0], dtype=np.complex128)
        if x > chs.hi:
            return np.array([0.0, self.c_plus * self.lam ** (-x)], dtype=np.complex128)
        return np.zeros(2, dtype=np.complex128)

    def is_outgoing(self, window: IntervalZ | None = None) -> bool:
        """N₁(supp♭φ) ⊂ chs(C−I₂) on ``window``."""
        state = self.evaluate(window or default_window(self.coins))
        return self.coins.chs.contains_interval(incoming_support(state).neighborhood(1))

    def residual(self, window: IntervalZ | None = None) -> float:
        state = self.evaluate(window or default_window(self.coins))
        return eigen_residual(self.coins, self.lam, state)

    def transfer_residual(self, window: IntervalZ | None = None) -> float:
        """max_x ‖Qφ(x+1) − T_λ(x)Qφ(x)‖ / ‖φ‖ over the steps that stay inside ``window``."""
        window = window or default_window(self.coins)
        state = self.evaluate(window)
        norm = state.norm()
        worst = 0.0
        for x in range(window.lo + 1, window.hi):
            step = transfer_at(self.coins.coin_at(x), self.lam) @ q_transform(state, x)
            worst = max(worst, float(np.max(np.abs(q_transform(state, x + 1) - step))))
        return worst / norm if norm > 0 else 0.0

    def to_dict(self, window: IntervalZ) -> dict[str, object]:
        state = self.evaluate(window)
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "c_minus": [self.c_minus.real, self.c_minus.imag],
            "c_plus": [self.c_plus.real, self.c_plus.imag],
            "window": [window.lo, window.hi],
            "amplitudes": [
                {"x": x, "L": [v[0].real, v[0].imag], "R": [v[1].real, v[1].imag]}
                for x, v in state.items()
            ],
        }


@dataclass(frozen=True)
class JordanChain:
    """
    Generalized resonant states φ_{λ,1..m} with (U−λ)φ_{λ,k} = φ_{λ,k−1}, φ_{λ,0} = 0.

    Attributes:
        coins: The walk
        lam: The resonance
        length: m(λ)
    """

    coins: CoinSequence
    lam: complex
    length: int

    def evaluate(self, window: IntervalZ) -> list[WalkState]:
        arrays = _chain_arrays(self.coins, self.lam, self.length, window.lo, window.hi)
        return [WalkState(window.lo, arrays[k]) for k in range(self.length)]

    def member(self, k: int, window: IntervalZ) -> WalkState:
        """φ_{λ,k} for 1 ≤ k ≤ m; φ_{λ,0} is the zero state."""
        if k == 0:
            return WalkState.zeros(window)
        if not 1 <= k <= self.length:
            raise DomainError(f"chain index {k} outside 0..{self.length}")
        return self.evaluate(window)[k - 1]

    def residuals(self, window: IntervalZ | None = None) -> NDArray[np.float64]:
        members = self.evaluate(window or default_window(self.coins))
        out = np.zeros(self.length)
        for k, state in enumerate(members):
            previous = members[k - 1] if k > 0 else None
            out[k] = eigen_residual(self.coins, self.lam, state, previous)
        return out

    def is_outgoing(self, window: IntervalZ | None = None) -> bool:
        chs = self.coins.chs
        return all(
            chs.contains_interval(incoming_support(state).neighborhood(1))
            for state in self.evaluate(window or default_window(self.coins))
        )


def _check_resonance(coins: CoinSequence, lam: complex, tol: float) -> None:
    if lam == 0 or coins.is_free:
        raise NotAResonanceError(lam, float("inf"))
    residual = polynomial_residual(sigma(coins).coeffs, lam)
    if residual > tol:
        raise NotAResonanceError(lam, residual)


def resonant_state(
    coins: CoinSequence, resonance: Resonance | complex, tol: float = RESIDUAL_TOL
) -> ResonantState:
    """
    The resonant state φ_λ, unique up to a constant.

    Raises:
        NotAResonanceError: If λ = 0 or |σ(λ)| exceeds ``tol``·‖σ‖
    """
    lam = complex(resonance.lam if isinstance(resonance, Resonance) else resonance)
    _check_resonance(coins, lam, tol)
    chs = coins.chs
    jets = _q_jets(coins, lam, 1, chs)
    t21 = complex(jets[chs.hi + 1][0, 1])
    state = ResonantState(coins, lam, lam ** (1 - chs.lo), t21 * lam ** (chs.hi + 1))
    residual = state.residual()
    if residual > CHAIN_RESIDUAL_TOL:
        logger.warning(f"resonant state at {format_complex(lam)} has eigen-residual {residual:.3e}")
    return state


def jordan_chain(
    coins: CoinSequence,
    resonance: Resonance,
    tol: float = RESIDUAL_TOL,
    residual_tol: float = CHAIN_RESIDUAL_TOL,
) -> JordanChain:
    """
    Jordan chain of length m(λ).

    Raises:
        NotAResonanceError: If λ is not a root of σ
        ChainResidualError: If some member violates the chain identity beyond ``residual_tol``
    """
    lam = complex(resonance.lam)
    _check_resonance(coins, lam, tol)
    chain = JordanChain(coins, lam, int(resonance.multiplicity))
    residuals = chain.residuals()
    if np.any(residuals > residual_tol):
        raise ChainResidualError(
            f"Jordan chain at {format_complex(lam)} violates (U-lambda)phi_k = phi_(k-1): "
            f"max residual {residuals.max():.3e}",
            residuals,
        )
    logger.debug(f"Jordan chain at {format_complex(lam)}: residuals {residuals}")
    return chain


def incoming_state(state: ResonantState, window: IntervalZ) -> WalkState:
    """
    S·P·conj(φ_λ), an incoming resonant state for λ̄⁻¹ when c₁₁ = c₂₂ everywhere.

    Here S is the shift and P swaps the components, so the result is
    x ↦ (conj φ^R(x+1), conj φ^L(x−1)).

    Raises:
        DomainError: If some coin has c₁₁ ≠ c₂₂
    """
    if any(abs(coin.c11 - coin.c22) > 1e-12 for _, coin in state.coins):
        raise DomainError("incoming states from outgoing ones need c11 = c22 at every site")
    wide = state.evaluate(window.neighborhood(1)).conj()
    a = np.zeros((window.size, 2), dtype=np.complex128)
    a[:, 0] = wide.right[2:]
    a[:, 1] = wide.left[:-2]
    return WalkState(window.lo, a)
