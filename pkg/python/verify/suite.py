"""
Acceptance checks against closed forms, independent oracles and direct simulation.

Each check returns a result dict:
    - name (str): Check identifier
    - success (bool): Whether every assertion of the check held
    - message (str): Status message
    - elapsed (float): Wall time in seconds
    - details (dict): Measured quantities

Checks never raise; unexpected errors are logged and reported as failures.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable

import numpy as np

from config.globals import DEFAULT_SEED, THREADS
from expansion.decompose import expand, verify_time_formula
from expansion.zero_space import zero_space
from gallery.models import double_barrier, random_kz_walk, random_walk, triple_barrier
from gallery.perturbation import generic_theta, splitting_report
from gallery.symmetry import conjugation_defect, gauge_transform, rotation_defect
from observables.survival import mean_survival_time, restricted_state_tau, survival
from observables.weak_limit import restricted_weak_limit, weak_limit
from resonances.cutoff import cutoff_matrix, eigen_oracle
from resonances.roots import multiset_distance
from resonances.solver import find_resonances, incoming_resonances
from resonances.states import eigen_residual, jordan_chain, resonant_state
from tools.errors import VerificationError
from tools.logger import get_logger
from transfer.scattering import resonance_multiplicity_from_trace, scattering_matrix
from walk.coins import Coin, CoinSequence
from walk.evolution import trajectory
from walk.states import IntervalZ, WalkState

logger = get_logger(__name__)

CheckBody = Callable[[], tuple[bool, str, dict[str, Any]]]

SUITES = ("full", "paper", "quick")
SUITE_ALIASES = {"paper": "full"}


def _run(name: str, body: CheckBody) -> dict[str, Any]:
    start = time.perf_counter()
    try:
        success, message, details = body()
    except Exception as e:
        logger.error(f"Check {name} raised: {e}", exc_info=True)
        success, message, details = False, f"Error: {str(e)}", {}
    elapsed = time.perf_counter() - start
    if success:
        logger.info(f"[PASS] {name} ({elapsed:.2f}s): {message}")
    else:
        logger.error(f"[FAIL] {name} ({elapsed:.2f}s): {message}")
    return {
        "name": name,
        "success": bool(success),
        "message": message,
        "elapsed": elapsed,
        "details": details,
    }


def _pairs(resonances: list[Any]) -> list[tuple[complex, int]]:
    return [(r.lam, r.multiplicity) for r in resonances]


def _barrier_walk() -> tuple[CoinSequence, WalkState, IntervalZ]:
    """Double barrier k=5, r=2^{-1/2}, ψ(1)=(0,1), J=[−1,6]."""
    model = double_barrier(5, 2**-0.5)
    return model.coins, model.initial_state(), IntervalZ(-1, 6)


def check_double_barrier_spectrum(sweep: bool = True) -> dict[str, Any]:
    """Solver output equals r^{1/k}e^{iπ(2j−1)/2k}, all simple."""

    def body() -> tuple[bool, str, dict[str, Any]]:
        cases = [(10, 2**-0.5)]
        if sweep:
            cases += [(k, r) for k in (1, 2, 5, 16) for r in (0.3, 2**-0.5, 0.9)]
        worst = 0.0
        failures = []
        for k, r in cases:
            model = double_barrier(k, r)
            resonances, _ = find_resonances(model.coins)
            expected = [(complex(lam), 1) for lam in model.resonances]
            distance = multiset_distance(_pairs(resonances), expected)
            worst = max(worst, distance)
            if distance > 1e-8 or len(resonances) != 2 * k:
                failures.append((k, r, distance))
        if failures:
            message = f"{len(failures)} double-barrier spectra off: {failures}"
            return False, message, {"worst": worst}
        return True, f"{len(cases)} spectra match within {worst:.2e}", {"worst": worst}

    return _run("double_barrier_spectrum", body)


def check_oracle_equivalence(
    count: int = 100, max_k: int = 8, seed: int = DEFAULT_SEED
) -> dict[str, Any]:
    """σ-roots and nonzero eigenvalues of E_J agree; Σm(λ) ≤ 2(|chs|−1)."""

    def body() -> tuple[bool, str, dict[str, Any]]:
        rng = np.random.default_rng(seed)
        worst = 0.0
        over_budget = 0
        mismatched = 0
        for _ in range(count):
            coins = random_walk(int(rng.integers(1, max_k + 1)), rng)
            resonances, summary = find_resonances(coins)
            pairs = eigen_oracle(cutoff_matrix(coins, coins.chs))
            oracle = [(lam, m) for lam, m in pairs if lam != 0]
            distance = multiset_distance(_pairs(resonances), oracle)
            worst = max(worst, distance if np.isfinite(distance) else 0.0)
            mismatched += int(not distance <= 1e-6)
            over_budget += int(summary.sum_mult > summary.budget)
        details = {"worst": worst, "mismatched": mismatched, "over_budget": over_budget}
        if mismatched or over_budget:
            message = f"{mismatched} oracle mismatches, {over_budget} budget violations"
            return False, message, details
        return True, f"{count} random walks agree within {worst:.2e}", details

    return _run("oracle_equivalence", body)


def check_expansion(n_max: int = 200) -> dict[str, Any]:
    """Reconstruction residual and the time-domain formula on N_{n−1−2|J|}(J)."""

    def body() -> tuple[bool, str, dict[str, Any]]:
        coins, psi, interval = _barrier_walk()
        result = expand(coins, psi, interval)
        times = list(range(2 * interval.size + 1, n_max + 1))
        report = verify_time_formula(result, times)
        details = {"residual": result.residual, **report}
        ok = result.residual <= 1e-8 and report["chain_error"] <= 1e-8
        message = f"residual {result.residual:.2e}, time error {report['chain_error']:.2e}"
        return ok, message, details

    return _run("resonance_expansion", body)


def check_quasi_periodicity(n_max: int = 200) -> dict[str, Any]:
    """ψ_{n+2k} = −r²ψ_n on J for n ≥ 2|J| + 1."""

    def body() -> tuple[bool, str, dict[str, Any]]:
        coins, psi, interval = _barrier_walk()
        period, alpha = 10, -0.5
        states = [s.on(interval) for s in trajectory(coins, psi, n_max + period)]
        n0 = 2 * interval.size + 1
        worst = max(
            states[n + period].max_abs_diff(states[n].scaled(alpha), interval)
            for n in range(n0, n_max + 1)
        )
        return worst <= 1e-12, f"max deviation {worst:.2e}", {"worst": worst}

    return _run("quasi_periodicity", body)


def check_decay_rate() -> dict[str, Any]:
    """Fitted log-rate over [50, 200] equals (1/k) log r within 1%."""

    def body() -> tuple[bool, str, dict[str, Any]]:
        coins, psi, interval = _barrier_walk()
        _, report = survival(coins, psi, interval, 200, window=(50, 200))
        expected = np.log(2**-0.5) / 5
        error = abs(report.norm_log_slope - expected) / abs(expected)
        details = {**report.to_dict(), "expected": expected, "relative_error": error}
        return error <= 0.01, f"relative slope error {error:.2e}", details

    return _run("decay_rate", body)


def check_restricted_state(n_max: int = 400) -> dict[str, Any]:
    """Survival, mean survival time and weak limit of 𝟙_Jφ_λ in closed form."""

    def body() -> tuple[bool, str, dict[str, Any]]:
        coins, _, interval = _barrier_walk()
        resonances, _ = find_resonances(coins)
        lam = resonances[0].lam
        psi = resonant_state(coins, lam).restricted(interval).normalized()

        survival_error = max(
            abs(state.restrict(interval).norm() - abs(lam) ** n)
            for n, state in enumerate(trajectory(coins, psi, 200))
        )
        tau = mean_survival_time(coins, psi, interval, n_max, restricted_lambda=lam)
        tau_error = abs(tau.tau - restricted_state_tau(lam))
        closed = restricted_weak_limit(coins, lam, interval)
        limit = weak_limit(coins, psi, 200, closed_form=closed)
        details = {
            "survival_error": survival_error,
            "tau": tau.tau,
            "tau_closed_form": tau.restricted_tau,
            "tau_tail": tau.tail_bound,
            "weak_limit": limit.to_dict(),
        }
        ok = (
            survival_error <= 1e-10
            and tau_error <= 1e-6 + tau.tail_bound
            and bool(limit.within_bound)
        )
        message = (
            f"survival {survival_error:.2e}, tau {tau_error:.2e}, "
            f"weak limit within {limit.flat_norm:.2e}: {limit.within_bound}"
        )
        return ok, message, details

    return _run("restricted_state_laws", body)


def check_zero_space(seed: int = DEFAULT_SEED) -> dict[str, Any]:
    """dim V_J(0) ≥ 2, the rank identity, and exit after 2|J| steps for a single coin."""

    def body() -> tuple[bool, str, dict[str, Any]]:
        rng = np.random.default_rng(seed)
        models = {
            "double_barrier": double_barrier(5, 2**-0.5).coins,
            "triple_barrier": triple_barrier(0.75, 12 / 13, 1 / 3).coins,
            "random": random_walk(4, rng),
        }
        details: dict[str, Any] = {}
        ok = True
        for name, coins in models.items():
            interval = coins.chs.neighborhood(1)
            resonances, summary = find_resonances(coins)
            dim = zero_space(coins, interval).dimension
            details[name] = {"dim": dim, "sum_mult": summary.sum_mult, "size": 2 * interval.size}
            ok &= dim >= 2 and dim + summary.sum_mult == 2 * interval.size

        size = 4
        single = CoinSequence({0: Coin.rotation(0.5)})
        interval = IntervalZ(0, size)
        psi = WalkState.from_sites({size: (1.0, 0.0)})
        norms = [s.restrict(interval).norm() for s in trajectory(single, psi, 2 * size + 4)]
        alive = all(v > 0 for v in norms[: 2 * size + 1])
        gone = all(v == 0 for v in norms[2 * size + 1 :])
        details["single_coin"] = {"alive_until_2N": alive, "zero_after_2N": gone}
        ok &= alive and gone
        return ok, f"zero-space checks {'hold' if ok else 'fail'}", details

    return _run("zero_space", body)


def check_triple_barrier() -> dict[str, Any]:
    """(3/4, 12/13, 1/3): two double resonances ±i/√2 with valid Jordan chains."""

    def body() -> tuple[bool, str, dict[str, Any]]:
        model = triple_barrier(0.75, 12 / 13, 1 / 3)
        resonances, _ = find_resonances(model.coins)
        expected = [(1j / np.sqrt(2), 2), (-1j / np.sqrt(2), 2)]
        distance = multiset_distance(_pairs(resonances), expected)
        residuals = [float(jordan_chain(model.coins, r).residuals().max()) for r in resonances]
        ok = (
            model.multiplicity_two
            and len(resonances) == 2
            and all(r.multiplicity == 2 for r in resonances)
            and distance <= 1e-6
            and max(residuals, default=0.0) <= 1e-9
        )
        details = {"distance": distance, "chain_residuals": residuals}
        worst = max(residuals, default=0.0)
        return ok, f"distance {distance:.2e}, chain residual {worst:.2e}", details

    return _run("triple_barrier_multiplicity", body)


def check_generic_simplicity(eps_values: tuple[float, ...] = (1e-3, 1e-4, 1e-5)) -> dict[str, Any]:
    """B(ϑ, ε) splits each double resonance into two simple roots at rate ε^{1/2}."""

    def body() -> tuple[bool, str, dict[str, Any]]:
        coins = triple_barrier(0.75, 12 / 13, 1 / 3).coins
        resonances, _ = find_resonances(coins)
        reports = []
        for res in resonances:
            sweep = generic_theta(coins, res.lam)
            theta = float(sweep.loc[sweep["abs_gamma"].idxmax(), "theta"])
            reports.append(splitting_report(coins, res, theta, eps_values))
        ok = all(
            r.all_simple and r.within_prediction and abs(r.slope - 0.5) <= 0.05 for r in reports
        )
        details = {"reports": [r.to_dict() for r in reports]}
        slopes = ", ".join(f"{r.slope:.4f}" for r in reports)
        return ok, f"splitting slopes {slopes}", details

    return _run("generic_simplicity", body)


def check_symmetries(seed: int = DEFAULT_SEED) -> dict[str, Any]:
    """Sign and e^{iπ/k} rotations, conjugation, and the incoming reflection λ ↦ λ̄⁻¹."""

    def body() -> tuple[bool, str, dict[str, Any]]:
        rng = np.random.default_rng(seed)
        barrier = double_barrier(5, 2**-0.5).coins
        models = {
            "double_barrier": barrier,
            "triple_barrier": triple_barrier(0.75, 12 / 13, 1 / 3).coins,
            "random": random_walk(5, rng),
        }
        details: dict[str, Any] = {}
        ok = True
        for name, coins in models.items():
            resonances, _ = find_resonances(coins)
            details[name] = {"sign": rotation_defect(resonances, 1, 1)}
            ok &= details[name]["sign"] <= 1e-6
            if coins.is_real:
                details[name]["conjugation"] = conjugation_defect(resonances)
                ok &= details[name]["conjugation"] <= 1e-6

        period = 3
        kz = random_kz_walk(period, 2, rng)
        kz_resonances, _ = find_resonances(kz)
        details["kz_rotation"] = rotation_defect(kz_resonances, 1, period)
        ok &= details["kz_rotation"] <= 1e-6
        if kz_resonances:
            state = resonant_state(kz, kz_resonances[0].lam)
            window = kz.chs.neighborhood(2)
            gauged = gauge_transform(kz, state, 1, period, window)
            details["gauge_residual"] = eigen_residual(kz, complex(gauged.lam), gauged.state)
            ok &= details["gauge_residual"] <= 1e-9

        resonances, _ = find_resonances(barrier)
        incoming = incoming_resonances(barrier)
        reflected = [(1 / r.lam.conjugate(), r.multiplicity) for r in resonances]
        details["incoming"] = multiset_distance(_pairs(incoming), reflected)
        ok &= details["incoming"] <= 1e-6
        return ok, f"symmetry defects {details}", details

    return _run("symmetries", body)


def check_scattering(points: int = 64) -> dict[str, Any]:
    """S(λ) unitary on |λ| = 1 and |tr S| blowing up next to every resonance."""

    def body() -> tuple[bool, str, dict[str, Any]]:
        coins = double_barrier(5, 2**-0.5).coins
        circle = np.exp(2j * np.pi * np.arange(points) / points)
        defect = max(scattering_matrix(coins, lam).unitarity_defect() for lam in circle)
        resonances, _ = find_resonances(coins)
        delta = scattering_matrix(coins, 1.0).delta
        trace_ok = True
        multiplicities = []
        if abs(1 + delta) > 1e-9:
            directions = np.exp(2j * np.pi * np.arange(8) / 8)
            for res in resonances:
                hit = False
                for radius in (1e-6, 1e-7, 1e-8, 1e-9):
                    traces = [
                        abs(scattering_matrix(coins, res.lam + radius * d).trace())
                        for d in directions
                    ]
                    if min(traces) > 1e6:
                        hit = True
                        break
                trace_ok &= hit
                others = [abs(res.lam - o.lam) for o in resonances if o is not res]
                gap = min([abs(res.lam)] + others)
                multiplicities.append(resonance_multiplicity_from_trace(coins, res.lam, 0.5 * gap))
        counts_ok = all(abs(m - 1.0) <= 1e-6 for m in multiplicities)
        details = {
            "unitarity_defect": defect,
            "delta": delta,
            "trace_multiplicities": multiplicities,
        }
        ok = defect <= 1e-10 and trace_ok and counts_ok
        return ok, f"unitarity {defect:.2e}, trace check {'ok' if trace_ok else 'failed'}", details

    return _run("scattering_consistency", body)


def resolve_suite(suite: str) -> str:
    """Canonical suite name; raises VerificationError for unknown names."""
    if suite not in SUITES:
        raise VerificationError(f"unknown suite {suite!r}; choose from {SUITES}")
    return SUITE_ALIASES.get(suite, suite)


def run_suite(suite: str = "full", seed: int = DEFAULT_SEED) -> dict[str, Any]:
    """
    Run every acceptance check; ``quick`` shrinks the random-instance counts and sweeps.

    ``paper`` is another name for ``full``.

    Raises:
        VerificationError: If ``suite`` is unknown
    """
    suite = resolve_suite(suite)
    quick = suite == "quick"
    checks: list[Callable[[], dict[str, Any]]] = [
        lambda: check_double_barrier_spectrum(sweep=not quick),
        lambda: check_oracle_equivalence(count=20 if quick else 100, seed=seed),
        check_expansion,
        check_quasi_periodicity,
        check_decay_rate,
        check_restricted_state,
        lambda: check_zero_space(seed=seed),
        check_triple_barrier,
        check_generic_simplicity,
        lambda: check_symmetries(seed=seed),
        check_scattering,
    ]
    logger.info(f"Starting verification suite '{suite}' with {len(checks)} checks (seed {seed})")
    with ThreadPoolExecutor(max_workers=min(THREADS, len(checks))) as pool:
        results = list(pool.map(lambda check: check(), checks))
    failed = [r["name"] for r in results if not r["success"]]
    if failed:
        logger.error(f"[FAILED] {len(failed)} check(s) failed: {', '.join(failed)}")
    else:
        logger.info(f"[SUCCESS] all {len(results)} checks passed")
    return {
        "suite": suite,
        "seed": seed,
        "success": not failed,
        "passed": len(results) - len(failed),
        "failed": failed,
        "results": results,
    }


if __name__ == "__main__":
    result = run_suite("quick")
    if result["success"]:
        logger.info(f"[SUCCESS] {result['passed']} checks passed")
    else:
        logger.error(f"[FAILED] {result['failed']}")
