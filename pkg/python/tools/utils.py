import json
import os
import tempfile
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from tools.errors import DomainError


def complex_to_pair(value: complex) -> list[float]:
    """
    Encode a complex number as the ``[re, im]`` pair used in every qwres JSON file.

    Args:
        value: Complex (or real) number

    Returns:
        Two-element list of floats

    Examples:
        >>> complex_to_pair(1 - 2j)
        [1.0, -2.0]
    """
    z = complex(value)
    return [float(z.real), float(z.imag)]


def pair_to_complex(pair: Any, where: str = "value") -> complex:
    """
    Decode a ``[re, im]`` pair (a bare real number is accepted as well).

    Args:
        pair: JSON value to decode
        where: Location used in the error message

    Returns:
        The complex number

    Raises:
        DomainError: If the value is neither a number nor a pair of numbers
    """
    if isinstance(pair, bool):
        raise DomainError(f"{where}: expected [re, im], got a boolean")
    if isinstance(pair, (int, float)):
        return complex(float(pair), 0.0)
    if isinstance(pair, Sequence) and not isinstance(pair, str) and len(pair) == 2:
        try:
            return complex(float(pair[0]), float(pair[1]))
        except (TypeError, ValueError):
            pass
    raise DomainError(f"{where}: expected [re, im], got {pair!r}")


def format_complex(value: complex, digits: int = 6) -> str:
    """
    Format a complex number for log messages.

    Examples:
        >>> format_complex(0.5j)
        '0.000000+0.500000i'
        >>> format_complex(-1)
        '-1.000000+0.000000i'
    """
    z = complex(value)
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.{digits}f}{sign}{abs(z.imag):.{digits}f}i"


def _to_builtin(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_builtin(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _to_builtin(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_pair(complex(obj))
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps_json(payload: Any) -> str:
    """Serialize to deterministic JSON (sorted keys, complex values as pairs)."""
    return json.dumps(_to_builtin(payload), sort_keys=True, indent=2) + "\n"


def atomic_write(path: str | Path, text: str) -> None:
    """
    Write text to ``path`` atomically.

    The content goes to a temporary file in the target directory first and is
    then moved over the destination with ``os.replace``.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


if __name__ == "__main__":
    print(format_complex(0.5j))
    print(dumps_json({"lambda": 0.25j, "values": np.array([1.0, 2.0])}))
