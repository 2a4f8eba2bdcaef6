"""
JSON encoding of walks and states.

Walk spec::

    {"coins": [{"x": 0, "matrix": [[[re, im], [re, im]], [[re, im], [re, im]]]},
               {"x": 5, "rotation": 0.7071}]}

State spec::

    {"amplitudes": [{"x": 1, "L": [re, im], "R": [re, im]}]}
"""

import json
from pathlib import Path
from typing import Any

import numpy as np

from tools.errors import DomainError
from tools.logger import get_logger
from tools.utils import complex_to_pair, pair_to_complex
from walk.coins import Coin, CoinSequence, InadmissibleCoinError
from walk.states import WalkState

logger = get_logger(__name__)


class WalkSpecError(DomainError):
    """Malformed walk or state JSON."""


def _load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise WalkSpecError(f"{path}: cannot read file ({e.strerror})") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise WalkSpecError(f"{path}:{e.lineno}:{e.colno}: malformed JSON ({e.msg})") from e


def _site(entry: Any, where: str) -> int:
    if not isinstance(entry, dict) or "x" not in entry:
        raise WalkSpecError(f"{where}: expected an object with an 'x' field")
    x = entry["x"]
    if isinstance(x, bool) or not isinstance(x, int):
        raise WalkSpecError(f"{where}: site 'x' must be an integer, got {x!r}")
    return x


def walk_from_dict(payload: Any, source: str = "walk") -> CoinSequence:
    """
    Decode a walk spec.

    Args:
        payload: Parsed JSON
        source: Name used in error locations

    Returns:
        The coin sequence

    Raises:
        WalkSpecError: On structural problems
        InadmissibleCoinError: If a coin violates unitarity or admissibility
    """
    if not isinstance(payload, dict) or not isinstance(payload.get("coins"), list):
        raise WalkSpecError(f"{source}: expected an object with a 'coins' list")
    coins: dict[int, Coin] = {}
    for i, entry in enumerate(payload["coins"]):
        where = f"{source}: coins[{i}]"
        x = _site(entry, where)
        if x in coins:
            raise WalkSpecError(f"{where}: duplicate site x={x}")
        try:
            if "rotation" in entry:
                coins[x] = Coin.rotation(float(entry["rotation"]))
            elif "matrix" in entry:
                rows = entry["matrix"]
                if not isinstance(rows, list) or len(rows) != 2:
                    raise WalkSpecError(f"{where}: 'matrix' must be a 2x2 array of [re, im]")
                matrix = np.array(
                    [
                        [pair_to_complex(v, f"{where}.matrix[{r}][{c}]") for c, v in enumerate(row)]
                        for r, row in enumerate(rows)
                    ],
                    dtype=np.complex128,
                )
                coins[x] = Coin(matrix)
            else:
                raise WalkSpecError(f"{where}: needs 'matrix' or 'rotation'")
        except InadmissibleCoinError as e:
            raise InadmissibleCoinError(f"{where} (x={x}): {e}", x) from e
        except (TypeError, ValueError) as e:
            raise WalkSpecError(f"{where}: {e}") from e
    return CoinSequence(coins)


def walk_to_dict(coins: CoinSequence) -> dict[str, Any]:
    return {
        "coins": [
            {"x": x, "matrix": [[complex_to_pair(v) for v in row] for row in coin.matrix]}
            for x, coin in coins
        ]
    }


def state_from_dict(payload: Any, source: str = "state") -> WalkState:
    """
    Decode a state spec.

    Raises:
        WalkSpecError: On structural problems or an empty amplitude list
    """
    if not isinstance(payload, dict) or not isinstance(payload.get("amplitudes"), list):
        raise WalkSpecError(f"{source}: expected an object with an 'amplitudes' list")
    values: dict[int, tuple[complex, complex]] = {}
    for i, entry in enumerate(payload["amplitudes"]):
        where = f"{source}: amplitudes[{i}]"
        x = _site(entry, where)
        if x in values:
            raise WalkSpecError(f"{where}: duplicate site x={x}")
        try:
            values[x] = (
                pair_to_complex(entry.get("L", 0.0), f"{where}.L"),
                pair_to_complex(entry.get("R", 0.0), f"{where}.R"),
            )
        except DomainError as e:
            raise WalkSpecError(str(e)) from e
    if not values:
        raise WalkSpecError(f"{source}: 'amplitudes' must not be empty")
    return WalkState.from_sites(values)


def state_to_dict(psi: WalkState) -> dict[str, Any]:
    return {
        "amplitudes": [
            {"x": x, "L": complex_to_pair(v[0]), "R": complex_to_pair(v[1])} for x, v in psi.items()
        ]
    }


def load_walk(path: str | Path) -> CoinSequence:
    coins = walk_from_dict(_load_json(path), str(path))
    logger.info(f"Loaded walk from {path}: support {coins.support}")
    return coins


def load_state(path: str | Path) -> WalkState:
    psi = state_from_dict(_load_json(path), str(path))
    logger.info(f"Loaded state from {path}: window {psi.window}")
    return psi
