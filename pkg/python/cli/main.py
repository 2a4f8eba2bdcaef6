"""
qwres command-line entry point.

Every subcommand prints JSON (complex numbers as ``[re, im]``) to stdout or to
``--output``. CSV outputs:

    simulate --emit-plotdata   x,n,amp            amp = ‖Uⁿψ(x)‖
    observe  --emit-plotdata   n,survival,c_plus,c_minus,flat_norm
    observe  --format csv      the same time series on stdout/--output

Exit codes: 0 success, 1 domain or usage error (bad input, inadmissible coin,
unknown option), 2 failed verification.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np
import pandas as pd

from config.globals import DEFAULT_SEED, EPS0, RESIDUAL_TOL, THETA_GRID, THREADS
from expansion.decompose import expand, predict_evolution, prediction_region, verify_time_formula
from gallery.models import double_barrier, random_walk, triple_barrier
from gallery.perturbation import generic_theta, splitting_report
from observables.distribution import distribution, heatmap_frame
from observables.survival import mean_survival_time, survival
from observables.weak_limit import time_series_frame, weak_limit
from resonances.cutoff import cutoff_matrix, eigen_oracle
from resonances.roots import multiset_distance
from resonances.solver import find_resonances, incoming_resonances
from resonances.states import default_window, jordan_chain, resonant_state
from tools.errors import DomainError, VerificationError
from tools.logger import get_logger
from tools.utils import atomic_write, dumps_json
from transfer.matrices import sigma
from verify.suite import SUITES, run_suite
from walk.evolution import evolve
from walk.io import load_state, load_walk, state_to_dict, walk_to_dict
from walk.states import IntervalZ

logger = get_logger(__name__)

SUBCOMMANDS = (
    "simulate",
    "resonances",
    "states",
    "expand",
    "observe",
    "gallery",
    "perturb",
    "verify",
    "sigma",
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFICATION = 2


@dataclass
class RunConfig:
    """
    Validated options of a single invocation.

    Attributes:
        subcommand: One of ``SUBCOMMANDS``
        walk_path: Walk spec JSON
        state_path: State spec JSON
        interval: J, parsed from ``--J a,b``
        n_max: Time horizon
        tol: Residual tolerance for resonances
        output: Destination of the main result (stdout when None)
        output_format: ``json`` or ``csv``
        plotdata: Destination of the CSV plot data
        seed: Seed for random instances
        threads: Worker cap for sweeps
        options: Subcommand-specific flags
    """

    subcommand: str
    walk_path: Path | None = None
    state_path: Path | None = None
    interval: IntervalZ | None = None
    n_max: int = 200
    tol: float = RESIDUAL_TOL
    output: Path | None = None
    output_format: str = "json"
    plotdata: Path | None = None
    seed: int = DEFAULT_SEED
    threads: int = THREADS
    options: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise DomainError(f"unknown subcommand {self.subcommand!r}")
        if not self.tol > 0:
            raise DomainError(f"--tol must be positive, got {self.tol}")
        if self.n_max < 0:
            raise DomainError(f"time horizon must be non-negative, got {self.n_max}")
        if self.output_format not in ("json", "csv"):
            raise DomainError(f"--format must be json or csv, got {self.output_format!r}")
        if self.threads < 1:
            raise DomainError(f"thread cap must be >= 1, got {self.threads}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        common = {
            "subcommand",
            "walk",
            "state",
            "J",
            "n_max",
            "tol",
            "output",
            "format",
            "emit_plotdata",
            "seed",
        }
        interval = IntervalZ.parse(args.J) if getattr(args, "J", None) else None
        return cls(
            subcommand=args.subcommand,
            walk_path=Path(args.walk) if getattr(args, "walk", None) else None,
            state_path=Path(args.state) if getattr(args, "state", None) else None,
            interval=interval,
            n_max=getattr(args, "n_max", 200),
            tol=getattr(args, "tol", RESIDUAL_TOL),
            output=Path(args.output) if args.output else None,
            output_format=getattr(args, "format", "json"),
            plotdata=Path(args.emit_plotdata) if getattr(args, "emit_plotdata", None) else None,
            seed=getattr(args, "seed", DEFAULT_SEED),
            options={k: v for k, v in vars(args).items() if k not in common},
        )

    def require_interval(self) -> IntervalZ:
        if self.interval is None:
            raise DomainError(f"{self.subcommand} needs --J a,b")
        return self.interval


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise DomainError(f"expected comma-separated numbers, got {text!r}") from e


def _site_value(text: str) -> tuple[int | None, float]:
    """Parse ``r`` or ``site=r`` for the gallery ``--r`` flag."""
    site, sep, value = text.rpartition("=")
    try:
        return (int(site) if sep else None), float(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected r or site=r, got {text!r}") from e


def _attach_signed_values(argv: Sequence[str]) -> list[str]:
    """Glue ``--r -1=0.75`` into ``--r=-1=0.75``; argparse reads ``-1=0.75`` as a flag."""
    out: list[str] = []
    tokens = list(argv)
    i = 0
    while i < len(tokens):
        if tokens[i] == "--r" and i + 1 < len(tokens) and tokens[i + 1].startswith("-"):
            out.append(f"--r={tokens[i + 1]}")
            i += 2
        else:
            out.append(tokens[i])
            i += 1
    return out


def _barrier_amplitudes(opts: dict[str, Any]) -> tuple[float | None, dict[int, float]]:
    """Split the ``--r`` values into a plain amplitude and per-site overrides."""
    plain: float | None = None
    sites: dict[int, float] = {}
    for site, value in opts.get("r") or []:
        if site is None:
            plain = value
        else:
            sites[site] = value
    return plain, sites


def _emit(config: RunConfig, text: str) -> None:
    if config.output is None:
        sys.stdout.write(text)
    else:
        atomic_write(config.output, text)
        logger.info(f"Wrote {config.subcommand} result to {config.output}")


def _emit_frame(path: Path, frame: pd.DataFrame) -> None:
    atomic_write(path, frame.to_csv(index=False))
    logger.info(f"Wrote {len(frame)} rows of plot data to {path}")


def run_simulate(config: RunConfig) -> dict[str, Any]:
    coins, psi = load_walk(config.walk_path), load_state(config.state_path)
    n = config.n_max
    state = evolve(coins, psi, n)
    mu = distribution(coins, psi, n)
    if config.plotdata is not None:
        _emit_frame(config.plotdata, heatmap_frame(coins, psi, n))
    return {"n": n, "state": state_to_dict(state), "total": mu.total}


def run_resonances(config: RunConfig) -> dict[str, Any]:
    coins = load_walk(config.walk_path)
    method = config.options["method"]
    payload: dict[str, Any] = {}
    resonances, summary = find_resonances(coins, tol=config.tol)
    if method in ("sigma", "both"):
        payload["resonances"] = [r.to_dict() for r in resonances]
        payload["summary"] = summary.to_dict()
    if method in ("cutoff", "both"):
        oracle = [] if coins.is_free else eigen_oracle(cutoff_matrix(coins, coins.chs))
        nonzero = [(lam, m) for lam, m in oracle if lam != 0]
        payload["cutoff"] = [{"re": lam.real, "im": lam.imag, "mult": m} for lam, m in nonzero]
        if method == "both":
            pairs = [(r.lam, r.multiplicity) for r in resonances]
            payload["distance"] = multiset_distance(pairs, nonzero)
    if config.options["incoming"]:
        payload["incoming"] = [r.to_dict() for r in incoming_resonances(coins)]
    return payload


def run_states(config: RunConfig) -> dict[str, Any]:
    coins = load_walk(config.walk_path)
    window = config.interval or default_window(coins)
    resonances, _ = find_resonances(coins, tol=config.tol)
    states = []
    for res in resonances:
        entry = resonant_state(coins, res).to_dict(window)
        entry["mult"] = res.multiplicity
        if res.multiplicity > 1:
            chain = jordan_chain(coins, res)
            entry["chain"] = [state_to_dict(s) for s in chain.evaluate(window)]
            entry["chain_residuals"] = chain.residuals(window)
        states.append(entry)
    return {"window": [window.lo, window.hi], "states": states}


def run_expand(config: RunConfig) -> dict[str, Any]:
    coins, psi = load_walk(config.walk_path), load_state(config.state_path)
    interval = config.require_interval()
    result = expand(coins, psi, interval)
    payload = result.to_dict()
    predict = config.options["predict"]
    if predict is not None:
        region = prediction_region(interval, predict)
        payload["prediction"] = {
            "n": predict,
            "region": [region.lo, region.hi],
            "state": state_to_dict(predict_evolution(result, predict)),
        }
    if config.options["verify"]:
        horizon = predict if predict is not None else config.n_max
        report = verify_time_formula(result, list(range(2 * interval.size + 1, horizon + 1)))
        payload["verification"] = report
        if report["chain_error"] > 1e-8:
            raise VerificationError(f"time formula error {report['chain_error']:.2e} exceeds 1e-8")
    return payload


def run_observe(config: RunConfig) -> dict[str, Any] | pd.DataFrame:
    coins, psi = load_walk(config.walk_path), load_state(config.state_path)
    interval = config.require_interval()
    n_max = config.n_max
    frame = time_series_frame(coins, psi, interval, n_max)
    if config.plotdata is not None:
        _emit_frame(config.plotdata, frame)
    if config.output_format == "csv":
        return frame

    opts = config.options
    selected = opts["survival"] or opts["tau"] or opts["weak_limit"] or opts["mu"] is not None
    payload: dict[str, Any] = {"n_max": n_max, "J": [interval.lo, interval.hi]}
    if opts["survival"] or not selected:
        _, report = survival(coins, psi, interval, n_max)
        payload["decay"] = report.to_dict()
    if opts["tau"] or not selected:
        payload["tau"] = mean_survival_time(coins, psi, interval, n_max).to_dict()
    if opts["weak_limit"] or not selected:
        payload["weak_limit"] = weak_limit(coins, psi, n_max).to_dict()
    if opts["mu"] is not None:
        mu = distribution(coins, psi, opts["mu"])
        payload["mu"] = {
            "n": mu.n,
            "total": mu.total,
            "values": [{"x": int(x), "p": float(p)} for x, p in mu.mu.items()],
        }
    return payload


def run_gallery(config: RunConfig) -> dict[str, Any]:
    opts = config.options
    model = opts["model"]
    plain, sites = _barrier_amplitudes(opts)
    if model == "double-barrier":
        if sites:
            raise DomainError("double-barrier takes a single --r amplitude, not site=r")
        coins = double_barrier(opts["k"], 2**-0.5 if plain is None else plain).coins
    elif model == "triple-barrier":
        if plain is not None:
            raise DomainError("triple-barrier takes --r site=r with site in -1, 0, 1")
        amplitudes = {-1: opts["r_minus"], 0: opts["r0"], 1: opts["r_plus"]}
        unknown = sorted(set(sites) - set(amplitudes))
        if unknown:
            raise DomainError(f"triple-barrier has coins at -1, 0, 1 only, got sites {unknown}")
        amplitudes.update(sites)
        barrier = triple_barrier(amplitudes[-1], amplitudes[0], amplitudes[1])
        if barrier.multiplicity_two:
            logger.info("triple barrier parameters sit on the double-root family")
        coins = barrier.coins
    else:
        coins = random_walk(opts["k"], np.random.default_rng(config.seed))
    return walk_to_dict(coins)


def run_perturb(config: RunConfig) -> dict[str, Any]:
    coins = load_walk(config.walk_path)
    opts = config.options
    eps_values = _parse_floats(opts["eps"])
    if not eps_values or any(not 0 < e <= EPS0 for e in eps_values):
        raise DomainError(f"--eps values must lie in (0, {EPS0}]")
    resonances, summary = find_resonances(coins, tol=config.tol)
    multiple = [r for r in resonances if r.multiplicity > 1]
    if opts["track"] == "lambda0":
        multiple = [r for r in multiple if abs(r.modulus - summary.lambda0) <= 1e-9]
    if not multiple:
        logger.info("no multiple resonance to split")
    reports = []
    for res in multiple:
        if opts["theta"] is not None:
            theta = float(opts["theta"])
        else:
            sweep = generic_theta(coins, res.lam, opts["theta_grid"])
            theta = float(sweep.loc[sweep["abs_gamma"].idxmax(), "theta"])
        reports.append(splitting_report(coins, res, theta, eps_values).to_dict())
    return {"track": opts["track"], "reports": reports}


def run_verify(config: RunConfig) -> dict[str, Any]:
    result = run_suite(config.options["suite"], seed=config.seed)
    if not result["success"]:
        _emit(config, dumps_json(result))
        raise VerificationError(f"{len(result['failed'])} check(s) failed: {result['failed']}")
    return result


def run_sigma(config: RunConfig) -> dict[str, Any]:
    poly = sigma(load_walk(config.walk_path))
    return {
        "coeffs": poly.coeffs,
        "delta": poly.delta,
        "k": poly.k,
        "dynamic_range": poly.dynamic_range,
    }


HANDLERS: dict[str, Callable[[RunConfig], Any]] = {
    "simulate": run_simulate,
    "resonances": run_resonances,
    "states": run_states,
    "expand": run_expand,
    "observe": run_observe,
    "gallery": run_gallery,
    "perturb": run_perturb,
    "verify": run_verify,
    "sigma": run_sigma,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwres",
        description="Resonances of finitely perturbed one-dimensional quantum walks.",
        epilog=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def command(name: str, help_text: str, walk: bool = True, state: bool = False) -> Any:
        p = sub.add_parser(name, help=help_text)
        if walk:
            p.add_argument("walk", help="walk spec JSON")
        if state:
            p.add_argument("state", help="state spec JSON")
        p.add_argument("--output", help="write the result here instead of stdout")
        return p

    p = command("simulate", "evolve a state directly", state=True)
    p.add_argument("-n", dest="n_max", type=int, default=60, help="number of steps")
    p.add_argument("--emit-plotdata", help="heatmap CSV with columns x,n,amp")

    p = command("resonances", "resonances and their multiplicities")
    p.add_argument("--method", choices=("sigma", "cutoff", "both"), default="sigma")
    p.add_argument("--tol", type=float, default=RESIDUAL_TOL)
    p.add_argument("--incoming", action="store_true", help="also list incoming resonances")

    p = command("states", "resonant states and Jordan chains")
    p.add_argument("--J", help="evaluation window a,b (default chs widened by 2)")
    p.add_argument("--tol", type=float, default=RESIDUAL_TOL)

    p = command("expand", "resonance expansion of a state on J", state=True)
    p.add_argument("--J", required=True, help="interval a,b containing supp psi and chs")
    p.add_argument("--predict", type=int, help="predict U^n psi from the expansion")
    p.add_argument("--verify", action="store_true", help="check the time formula against evolution")
    p.add_argument("--n-max", dest="n_max", type=int, default=200)

    p = command("observe", "survival, mean survival time, weak limit, distributions", state=True)
    p.add_argument("--J", required=True, help="interval a,b")
    p.add_argument("--n-max", dest="n_max", type=int, default=500)
    p.add_argument("--survival", action="store_true")
    p.add_argument("--tau", action="store_true")
    p.add_argument("--weak-limit", dest="weak_limit", action="store_true")
    p.add_argument("--mu", type=int, help="distribution at time n")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--emit-plotdata", help="CSV with n,survival,c_plus,c_minus,flat_norm")

    p = command("gallery", "emit a named walk as JSON", walk=False)
    p.add_argument("model", choices=("double-barrier", "triple-barrier", "random"))
    p.add_argument("--k", type=int, default=10)
    p.add_argument(
        "--r",
        type=_site_value,
        action="append",
        help="barrier amplitude r, or site=r for one triple-barrier coin (e.g. -1=0.75)",
    )
    p.add_argument("--r-minus", dest="r_minus", type=float, default=0.75)
    p.add_argument("--r0", type=float, default=12 / 13)
    p.add_argument("--r-plus", "--r1", dest="r_plus", type=float, default=1 / 3)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = command("perturb", "split multiple resonances with the B(theta, eps) family")
    p.add_argument("--theta-grid", dest="theta_grid", type=int, default=THETA_GRID)
    p.add_argument("--theta", type=float, help="fixed angle instead of the grid maximum")
    p.add_argument("--eps", default="1e-3,1e-4,1e-5")
    p.add_argument("--track", choices=("lambda0", "all"), default="lambda0")
    p.add_argument("--tol", type=float, default=RESIDUAL_TOL)

    p = command("verify", "run the acceptance suite", walk=False)
    p.add_argument("--suite", choices=SUITES, default="full")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    command("sigma", "coefficients of sigma (ascending) and Delta")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """
    Parse ``argv``, run the subcommand and write its output.

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_signed_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as e:
        # argparse exits with 2 on usage errors; 2 is reserved for failed verification
        return EXIT_OK if e.code in (0, None) else EXIT_DOMAIN
    try:
        config = RunConfig.from_args(args)
        logger.info(f"Running qwres {config.subcommand}")
        result = HANDLERS[config.subcommand](config)
        if isinstance(result, pd.DataFrame):
            _emit(config, result.to_csv(index=False))
        else:
            _emit(config, dumps_json(result))
        return EXIT_OK
    except VerificationError as e:
        logger.error(f"[FAILED] {e}")
        return EXIT_VERIFICATION
    except DomainError as e:
        logger.error(f"Error: {e}")
        return EXIT_DOMAIN
    except Exception as e:
        logger.error(f"Unexpected error in {args.subcommand}: {e}", exc_info=True)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
