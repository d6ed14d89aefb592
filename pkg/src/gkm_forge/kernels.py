"""Selects the compiled composition sweep when available, else the pure-Python one."""

from __future__ import annotations

import os

from . import _sweep_py

try:
    if os.environ.get("GKM_FORGE_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _sweep as _compiled
except ImportError:
    _compiled = None

COMPILED = _compiled is not None
sweep = _compiled.sweep if COMPILED else _sweep_py.sweep
pure_sweep = _sweep_py.sweep
