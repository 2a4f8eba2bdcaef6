"""Pytest bootstrap: expose the qwres packages under python/ and quiet the log."""

import os
import sys
from pathlib import Path

# Modules import each other as top-level packages (walk, transfer, ...)
python_dir = Path(__file__).parent / "python"
sys.path.insert(0, str(python_dir))

os.environ.setdefault("QWRES_LOG_LEVEL", "WARNING")
