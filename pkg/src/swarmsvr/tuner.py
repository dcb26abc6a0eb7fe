"""Hyperparameter search: PSO or GWO over the SVR's (C, gamma) plane.

Fitness of a candidate is the RMSE of an RBF-kernel SVR trained on an
inner 80/20 split of the training partition; the inner split is seeded
once per tune run so every candidate faces identical validation data.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from swarmsvr import gwo, metrics, pso, svr
from swarmsvr.dataio import split_indices
from swarmsvr.kernels import KernelSpec
from swarmsvr.spaces import SearchSpace

SPACE_PRESETS = {
    "default": SearchSpace((0.01, 0.01), (100.0, 100.0), ("C", "gamma")),
    "gwo-narrow": SearchSpace((0.01, 0.01), (50.0, 50.0), ("C", "gamma")),
}

OPTIMIZERS = ("pso", "gwo")


class TuningError(RuntimeError):
    pass


@dataclass(frozen=True)
class TunerParams:
    inner_ratio: float = 0.8
    inner_seed: int = 0
    epsilon: float = 0.1
    tol: float = 1e-3
    max_passes: int = 10_000
    cache_rows: int | None = None
    log_space: bool = False

    def __post_init__(self):
        if not 0 < self.inner_ratio < 1:
            raise ValueError(f"inner_ratio must be in (0, 1), got {self.inner_ratio}")


@dataclass(frozen=True)
class TuneResult:
    best_c: float
    best_gamma: float
    best_fitness: float
    history: tuple[float, ...]
    optimizer_tag: str
    seed: int

    def to_dict(self) -> dict:
        return {
            "best_c": self.best_c,
            "best_gamma": self.best_gamma,
            "best_fitness": self.best_fitness,
            "history": list(self.history),
            "optimizer": self.optimizer_tag,
            "seed": self.seed,
        }

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))


def _svr_params(c: float, gamma: float, params: TunerParams) -> svr.SvrParams:
    return svr.SvrParams(
        c=c,
        epsilon=params.epsilon,
        kernel=KernelSpec("rbf", gamma=gamma),
        tol=params.tol,
        max_passes=params.max_passes,
        cache_rows=params.cache_rows,
    )


def fitness(candidate, train_X: np.ndarray, train_y: np.ndarray, params: TunerParams) -> float:
    """Inner-validation RMSE of an SVR trained with candidate = (C, gamma).

    Lower is better; a candidate whose training fails to converge is
    rejected with +inf.
    """
    c, gamma = (float(v) for v in candidate)
    if not (c > 0 and gamma > 0 and math.isfinite(c) and math.isfinite(gamma)):
        return math.inf
    tr_idx, val_idx = split_indices(len(train_y), params.inner_ratio, params.inner_seed)
    try:
        model = svr.train(train_X[tr_idx], train_y[tr_idx], _svr_params(c, gamma, params))
    except svr.ConvergenceError:
        return math.inf
    pred = svr.predict_batch(model, train_X[val_idx])
    try:
        rmse = metrics.evaluate(train_y[val_idx], pred).rmse
    except metrics.UndefinedR2Error as exc:
        rmse = exc.partial.rmse
    return rmse if math.isfinite(rmse) else math.inf


def tune(
    train_X: np.ndarray,
    train_y: np.ndarray,
    optimizer: str,
    opt_params,
    space: SearchSpace | None = None,
    tuner_params: TunerParams | None = None,
    trace_path=None,
) -> TuneResult:
    """Search (C, gamma) with the chosen optimizer; stop at the iteration cap."""
    if optimizer not in OPTIMIZERS:
        raise ValueError(f"optimizer must be one of {OPTIMIZERS}, got {optimizer!r}")
    if len(train_y) == 0:
        raise TuningError("empty training partition")
    space = space if space is not None else SPACE_PRESETS["default"]
    if space.dim != 2:
        raise ValueError(f"search space must be 2-dimensional (C, gamma), got dim {space.dim}")
    if not all(lo > 0 for lo in space.lower):
        raise ValueError("C and gamma bounds must be positive")
    tuner_params = tuner_params if tuner_params is not None else TunerParams()

    if tuner_params.log_space:
        search = SearchSpace(
            tuple(math.log10(v) for v in space.lower),
            tuple(math.log10(v) for v in space.upper),
            space.labels,
        )

        def to_candidate(pos):
            return (10.0 ** pos[0], 10.0 ** pos[1])

    else:
        search = space

        def to_candidate(pos):
            return (pos[0], pos[1])

    def objective(pos):
        return fitness(to_candidate(pos), train_X, train_y, tuner_params)

    run = pso.optimize if optimizer == "pso" else gwo.optimize
    best_pos, best_fit, history = run(objective, search, opt_params, trace_path=trace_path)
    if not math.isfinite(best_fit):
        raise TuningError("every candidate evaluated to a non-finite fitness")
    best_c, best_gamma = to_candidate(best_pos)
    return TuneResult(
        best_c=float(best_c),
        best_gamma=float(best_gamma),
        best_fitness=float(best_fit),
        history=tuple(history),
        optimizer_tag=optimizer,
        seed=opt_params.seed,
    )


def final_fit(
    train_X: np.ndarray,
    train_y: np.ndarray,
    best: TuneResult,
    tuner_params: TunerParams | None = None,
    metadata: dict | None = None,
) -> svr.SvrModel:
    """Retrain on the full training partition at the tuned (C, gamma)."""
    tuner_params = tuner_params if tuner_params is not None else TunerParams()
    meta = {"optimizer": best.optimizer_tag, "seed": best.seed}
    meta.update(metadata or {})
    return svr.train(
        train_X, train_y, _svr_params(best.best_c, best.best_gamma, tuner_params), metadata=meta
    )
