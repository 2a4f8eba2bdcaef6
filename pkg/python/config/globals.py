"""Global configuration constants."""

import os
from pathlib import Path

from dotenv import load_dotenv

from tools.errors import DomainError

load_dotenv()

BASE_PATH = Path(__file__).resolve().parents[2]

# Environment
ENV_NAME = os.getenv("QWRES_ENV", "dev")
_logs_path = os.getenv("QWRES_LOGS_PATH")
LOGS_PATH = Path(_logs_path.replace("{BASE_PATH}", str(BASE_PATH))) if _logs_path else None
LOG_LEVEL = os.getenv("QWRES_LOG_LEVEL", "INFO").upper()


def parse_threads(raw: str | None) -> int:
    """Worker cap from QWRES_THREADS; unset means the CPU count, at least 1."""
    if raw is None or not raw.strip():
        return max(1, os.cpu_count() or 1)
    try:
        return max(1, int(raw))
    except ValueError as e:
        raise DomainError(f"QWRES_THREADS must be an integer, got {raw!r}") from e


THREADS = parse_threads(os.getenv("QWRES_THREADS"))

# Logging configuration
C_LOG_BASE_NAME = "qwres"
C_LOG_FORMAT = "[%(asctime)-15s][%(name)s][%(funcName)s:%(lineno)d] %(message)s"

# Coins
UNITARY_TOL = 1e-12
ADMISSIBLE_TOL = 1e-12

# Root finding and multiplicities
ROOT_MAX_ITER = 200
ROOT_STEP_TOL = 1e-13
CLUSTER_TOL = 1e-6
MULTIPLICITY_TOL = 1e-6
RESIDUAL_TOL = 1e-9
ZERO_COEFFICIENT_TOL = 1e-13
MODULUS_TOL = 1e-9

# Linear algebra
KERNEL_TOL = 1e-10
CONDITION_WARN = 1e12
DYNAMIC_RANGE_WARN = 1e12
ORACLE_MAX_SIZE = 256
POLE_TOL = 1e-13

# Expansion and observables
COEFFICIENT_TOL = 1e-9
QUADRATURE_NODES = 64
SURVIVAL_FLOOR = 1e-250
CHAIN_RESIDUAL_TOL = 1e-9

# Perturbation sweep
EPS0 = 1e-2
THETA_GRID = 16
GAMMA_TOL = 1e-8

# Random instances
DEFAULT_SEED = 20240531
RANDOM_COIN_MIN_DIAGONAL = 0.1
