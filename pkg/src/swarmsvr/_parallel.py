"""Fitness-evaluation dispatch with an env-var thread cap.

SWARM_SVR_THREADS: unset/1 = serial, 0 = one thread per CPU, k = k
threads. Results are collected in candidate order, so the outcome is
independent of scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("SWARM_SVR_THREADS", "").strip()
    if not raw:
        return 1
    n = int(raw)
    if n < 0:
        raise ValueError(f"SWARM_SVR_THREADS must be >= 0, got {n}")
    return os.cpu_count() or 1 if n == 0 else n


def _guard(value) -> float:
    value = float(value)
    return value if math.isfinite(value) else math.inf


def evaluate_all(objective, positions) -> list[float]:
    """Evaluate objective at every position; non-finite results become +inf."""
    workers = thread_count()
    if workers > 1 and len(positions) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return [_guard(v) for v in pool.map(objective, positions)]
    return [_guard(objective(p)) for p in positions]
