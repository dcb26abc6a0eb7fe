"""Selects the dual-solver backend at import: compiled if available.

The Cython extension (swarmsvr._smo) and the pure-Python module
(swarmsvr._smo_py) implement the same solver with identical arithmetic;
set SWARM_SVR_BACKEND=python to force the fallback.
"""

from __future__ import annotations

import os

_forced = os.environ.get("SWARM_SVR_BACKEND", "").strip().lower()
if _forced not in ("", "python", "compiled"):
    raise RuntimeError(f"SWARM_SVR_BACKEND must be 'python' or 'compiled', got {_forced!r}")

if _forced == "python":
    from swarmsvr import _smo_py as _impl

    _NAME = "python"
else:
    try:
        from swarmsvr import _smo as _impl  # type: ignore[attr-defined]

        _NAME = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise
        from swarmsvr import _smo_py as _impl

        _NAME = "python"

solve_dual = _impl.solve


def solver_backend_name() -> str:
    """Name of the active solver backend ('compiled' or 'python')."""
    return _NAME


def get_solver(name: str):
    """Fetch a specific backend's solve function (for tests/benchmarks)."""
    if name == "python":
        from swarmsvr import _smo_py

        return _smo_py.solve
    if name == "compiled":
        from swarmsvr import _smo  # raises ImportError if not built

        return _smo.solve
    raise ValueError(f"unknown backend {name!r}")
