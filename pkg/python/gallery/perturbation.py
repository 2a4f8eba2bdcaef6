"""
Generic simplicity of resonances by perturbing the rightmost coin.

The coin at x⁺ is replaced by B(ϑ, ε) = C_{p,q,0} * C(x⁺) with

    p(ϑ, ε) = (1 + εe^{iϑ})/√(1 + 2ε cos ϑ),   q(ϑ, ε) = εe^{iϑ}/√(1 + 2ε cos ϑ).

To first order σ_ε(λ) = σ(λ) + εγ(ϑ, λ), and near a resonance λ₀ of
multiplicity m

    σ_ε(λ) ≈ c(λ − λ₀)^m + εγ(ϑ, λ₀),

so whenever γ(ϑ, λ₀) ≠ 0 the root splits into m simple roots at distance
|εγ/c|^{1/m} from λ₀.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from config.globals import EPS0, GAMMA_TOL, THETA_GRID, THREADS
from gallery.group import GroupElement, group_product
from resonances.roots import taylor_coefficients
from resonances.solver import Resonance, find_resonances
from tools.errors import DomainError
from tools.logger import get_logger
from tools.utils import format_complex
from transfer.matrices import sigma, transfer_at, transfer_parameters
from walk.coins import Coin, CoinSequence

logger = get_logger(__name__)

FINITE_DIFFERENCE_STEP = 1e-7


def perturbation_element(theta: float, eps: float) -> GroupElement:
    """(p(ϑ,ε), q(ϑ,ε), 0)."""
    scale = math.sqrt(1.0 + 2.0 * eps * math.cos(theta))
    shift = eps * complex(np.exp(1j * theta))
    return GroupElement((1.0 + shift) / scale, shift / scale, 0.0)


def perturbation_coin(coin: Coin, theta: float, eps: float) -> Coin:
    """B(ϑ, ε) = C_{p(ϑ,ε),q(ϑ,ε),0} * coin."""
    return group_product(perturbation_element(theta, eps).coin, coin)


def perturb(
    coins: CoinSequence, theta: float, eps: float, eps0: float = EPS0
) -> CoinSequence:
    """
    Replace C(x⁺) by B(ϑ, ε).

    Raises:
        DomainError: For the free walk or ε outside [0, ε₀]
    """
    if coins.is_free:
        raise DomainError("the free walk has no coin to perturb")
    if not 0.0 <= eps <= eps0:
        raise DomainError(f"eps={eps} outside [0, {eps0}]")
    if eps == 0.0:
        return coins
    site = coins.chs.hi
    return coins.with_coin(site, perturbation_coin(coins.coin_at(site), theta, eps))


def _left_column(coins: CoinSequence, lam: complex) -> NDArray[np.complex128]:
    """(σ_{k−1}(λ), τ_{k−1}(λ)) = λ^{k−1}T(x⁺−1)···T(x⁻)e₁."""
    chs = coins.chs
    vector = np.array([1.0, 0.0], dtype=np.complex128)
    for x in range(chs.lo, chs.hi):
        vector = transfer_at(coins.coin_at(x), lam) @ vector
    return lam ** (chs.size - 1) * vector


def gamma(coins: CoinSequence, theta: float, lam0: complex) -> complex:
    """
    γ(ϑ, λ₀) = dσ_ε(λ₀)/dε at ε = 0.

    With (p, q, θ) the parameters of C(x⁺),

        γ = e^{iθ}(λ₀²a(ϑ)σ_{k−1}(λ₀) + λ₀b(ϑ)τ_{k−1}(λ₀)),
        a(ϑ) = i sin ϑ·p + e^{−iϑ}q,   b(ϑ) = i sin ϑ·q̄ + e^{−iϑ}p̄.
    """
    lam0 = complex(lam0)
    params = transfer_parameters(coins.coin_at(coins.chs.hi))
    sine = 1j * math.sin(theta)
    turn = complex(np.exp(-1j * theta))
    a = sine * params.p + turn * params.q
    b = sine * np.conj(params.q) + turn * np.conj(params.p)
    s, t = _left_column(coins, lam0)
    return complex(np.exp(1j * params.theta) * (lam0**2 * a * s + lam0 * b * t))


def gamma_finite_difference(
    coins: CoinSequence, theta: float, lam0: complex, step: float = FINITE_DIFFERENCE_STEP
) -> complex:
    """(σ_h(λ₀) − σ(λ₀))/h, the finite-difference counterpart of :func:`gamma`."""
    base = sigma(coins)(lam0)
    moved = sigma(perturb(coins, theta, step))(lam0)
    return complex((moved - base) / step)


def generic_theta(
    coins: CoinSequence, lam0: complex, grid: int = THETA_GRID
) -> pd.DataFrame:
    """
    γ(ϑ, λ₀) over ``grid`` equispaced angles.

    Columns ``theta, gamma_re, gamma_im, abs_gamma, fd_abs_gamma, generic``; an
    angle is generic when |γ| exceeds ``GAMMA_TOL`` times the largest |γ| on the grid.
    """
    thetas = 2.0 * np.pi * np.arange(grid) / grid
    values = np.array([gamma(coins, float(t), lam0) for t in thetas])
    fd = np.array([gamma_finite_difference(coins, float(t), lam0) for t in thetas])
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    frame = pd.DataFrame(
        {
            "theta": thetas,
            "gamma_re": values.real,
            "gamma_im": values.imag,
            "abs_gamma": np.abs(values),
            "fd_abs_gamma": np.abs(fd),
        }
    )
    frame["generic"] = frame["abs_gamma"] > GAMMA_TOL * scale if scale > 0 else False
    mismatch = float(np.max(np.abs(values - fd))) if values.size else 0.0
    if mismatch > 1e-4 * max(scale, 1e-300):
        logger.warning(
            f"analytic and finite-difference gamma disagree by {mismatch:.2e} "
            f"at {format_complex(lam0)}"
        )
    return frame


@dataclass(frozen=True)
class SplittingReport:
    """
    Splitting of a multiple resonance under B(ϑ, ε).

    Attributes:
        lam0: The multiple resonance
        multiplicity: m(λ₀)
        theta: ϑ
        gamma: γ(ϑ, λ₀)
        c: σ^{(m)}(λ₀)/m!
        frame: One row per ε with ``eps, displacement, predicted, all_simple``
        slope: log-log slope of displacement against ε (1/m expected)
    """

    lam0: complex
    multiplicity: int
    theta: float
    gamma: complex
    c: complex
    frame: pd.DataFrame = field(compare=False)
    slope: float

    @property
    def all_simple(self) -> bool:
        return bool(self.frame["all_simple"].all())

    @property
    def within_prediction(self) -> bool:
        """Every split root lies within 5|εγ/c|^{1/m} of λ₀."""
        return bool((self.frame["max_distance"] <= 5.0 * self.frame["predicted"]).all())

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda0": [self.lam0.real, self.lam0.imag],
            "multiplicity": self.multiplicity,
            "theta": self.theta,
            "gamma": [self.gamma.real, self.gamma.imag],
            "c": [self.c.real, self.c.imag],
            "slope": self.slope,
            "all_simple": self.all_simple,
            "rows": self.frame.to_dict(orient="records"),
        }


def _nearest_roots(resonances: Sequence[Resonance], lam0: complex, count: int) -> list[Resonance]:
    return sorted(resonances, key=lambda r: abs(r.lam - lam0))[:count]


def _split_row(
    coins: CoinSequence, theta: float, eps: float, lam0: complex, m: int
) -> dict[str, Any]:
    resonances, _ = find_resonances(perturb(coins, theta, eps))
    near = _nearest_roots(resonances, lam0, m)
    distances = np.array([abs(r.lam - lam0) for r in near])
    return {
        "eps": eps,
        "roots": len(near),
        "displacement": float(distances.mean()),
        "max_distance": float(distances.max()),
        "all_simple": all(r.multiplicity == 1 for r in near) and len(near) == m,
    }


def splitting_report(
    coins: CoinSequence,
    resonance: Resonance,
    theta: float,
    eps_values: Sequence[float] = (1e-3, 1e-4, 1e-5),
) -> SplittingReport:
    """
    Track the roots near λ₀ over ε and fit the log-log displacement slope.

    Raises:
        DomainError: If λ₀ is simple or γ(ϑ, λ₀) vanishes at this ϑ
    """
    lam0, m = complex(resonance.lam), int(resonance.multiplicity)
    if m < 2:
        raise DomainError(f"resonance {format_complex(lam0)} is already simple")
    g = gamma(coins, theta, lam0)
    poly = sigma(coins)
    c = complex(taylor_coefficients(poly.coeffs, lam0, m)[m])
    if abs(g) <= GAMMA_TOL * poly.scale:
        raise DomainError(f"theta={theta:.6f} is not generic for {format_complex(lam0)}")

    with ThreadPoolExecutor(max_workers=min(THREADS, len(eps_values))) as pool:
        rows = list(pool.map(lambda e: _split_row(coins, theta, e, lam0, m), eps_values))
    frame = pd.DataFrame(rows)
    frame["predicted"] = (frame["eps"] * abs(g) / abs(c)) ** (1.0 / m)
    slope = float(np.polyfit(np.log(frame["eps"]), np.log(frame["displacement"]), 1)[0])
    logger.info(
        f"Splitting of {format_complex(lam0)} (m={m}) at theta={theta:.4f}: "
        f"slope {slope:.4f}, all simple {bool(frame['all_simple'].all())}"
    )
    return SplittingReport(lam0, m, float(theta), g, c, frame, slope)
