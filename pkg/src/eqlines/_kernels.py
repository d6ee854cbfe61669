"""Kernel backend selection.

Uses the compiled ``_core`` extension when it is importable, otherwise the
pure-Python ``_pycore``. Setting ``EQLINES_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import os

if os.environ.get("EQLINES_PURE_PYTHON", "") not in ("", "0"):
    from . import _pycore as impl
else:
    try:
        from . import _core as impl  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        from . import _pycore as impl

BACKEND: str = impl.BACKEND
max_clique_bits = impl.max_clique_bits
seidel_fill = impl.seidel_fill
orbit_representatives = impl.orbit_representatives
