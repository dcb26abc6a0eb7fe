"""Epsilon-insensitive support vector regression on the dual problem.

Training solves the box-constrained dual of the epsilon-SVR primal in
the coefficient differences beta_i = alpha_i - alpha*_i; the predictor
is f(x) = sum_i beta_i K(sv_i, x) + b over the stored support vectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from swarmsvr import _backend
from swarmsvr.kernels import KernelSpec, gram_matrix, kernel_row

DEFAULT_CACHE_ROWS = 2000


class ConvergenceError(RuntimeError):
    """Solver hit its iteration cap before meeting the KKT tolerance."""

    def __init__(self, gap: float, n_updates: int):
        super().__init__(
            f"dual solver did not converge after {n_updates} updates; worst KKT violation {gap:.3e}"
        )
        self.gap = gap
        self.n_updates = n_updates


@dataclass(frozen=True)
class SvrParams:
    c: float = 1.0
    epsilon: float = 0.1
    kernel: KernelSpec = field(default_factory=KernelSpec)
    tol: float = 1e-3
    max_passes: int = 10_000
    cache_rows: int | None = None

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"penalty c must be > 0, got {self.c}")
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if not self.max_passes > 0:
            raise ValueError(f"max_passes must be > 0, got {self.max_passes}")


@dataclass(frozen=True)
class FitInfo:
    n_updates: int
    gap: float
    n_sv: int
    backend: str


@dataclass
class SvrModel:
    """Trained regressor: support vectors, their coefficients, and bias.

    Rows with a zero coefficient are not stored; sv_indices maps the
    stored rows back to positions in the training matrix.
    """

    support_vectors: np.ndarray
    beta: np.ndarray
    bias: float
    kernel: KernelSpec
    sv_indices: np.ndarray
    n_train: int
    params: SvrParams
    fit_info: FitInfo
    scaler: "object | None" = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        scaler = self.scaler.to_dict() if self.scaler is not None else None
        return {
            "kernel": self.kernel.to_dict(),
            "support_vectors": self.support_vectors.tolist(),
            "beta": self.beta.tolist(),
            "bias": self.bias,
            "sv_indices": self.sv_indices.tolist(),
            "n_train": self.n_train,
            "scaler": scaler,
            "params": {
                "c": self.params.c,
                "epsilon": self.params.epsilon,
                "tol": self.params.tol,
                "max_passes": self.params.max_passes,
            },
            "fit_info": {
                "n_updates": self.fit_info.n_updates,
                "gap": self.fit_info.gap,
                "n_sv": self.fit_info.n_sv,
                "backend": self.fit_info.backend,
            },
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SvrModel":
        from swarmsvr.dataio import ScalerParams

        kernel = KernelSpec.from_dict(d["kernel"])
        scaler = ScalerParams.from_dict(d["scaler"]) if d.get("scaler") else None
        p = d["params"]
        fi = d["fit_info"]
        sv = np.asarray(d["support_vectors"], dtype=float)
        if sv.ndim == 1:
            sv = sv.reshape(0, 0) if sv.size == 0 else sv.reshape(1, -1)
        return cls(
            support_vectors=sv,
            beta=np.asarray(d["beta"], dtype=float),
            bias=float(d["bias"]),
            kernel=kernel,
            sv_indices=np.asarray(d["sv_indices"], dtype=int),
            n_train=int(d["n_train"]),
            params=SvrParams(
                c=p["c"], epsilon=p["epsilon"], kernel=kernel, tol=p["tol"], max_passes=p["max_passes"]
            ),
            fit_info=FitInfo(fi["n_updates"], fi["gap"], fi["n_sv"], fi["backend"]),
            scaler=scaler,
            metadata=d.get("metadata", {}),
        )

    def save(self, path: str | Path):
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path: str | Path) -> "SvrModel":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _feasibility_bounds(beta, F, c, epsilon):
    """Interval [lo, hi] of bias values consistent with the final gradient."""
    up = F + np.where(beta >= 0.0, epsilon, -epsilon)
    down = F + np.where(beta > 0.0, epsilon, -epsilon)
    min_up = np.min(np.where(beta < c, up, np.inf))
    max_down = np.max(np.where(beta > -c, down, -np.inf))
    return -min_up, -max_down


def train(X, y, params: SvrParams, solver=None, metadata: dict | None = None) -> SvrModel:
    """Fit an epsilon-SVR model; raises ConvergenceError on a stuck solve.

    `solver` overrides the backend solve function (twin-backend tests
    and the benchmark use it); everyone else leaves it as None.
    """
    X = np.ascontiguousarray(X, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValueError(f"misaligned training data: X {X.shape}, y {y.shape}")
    n = X.shape[0]
    if n < 1:
        raise ValueError("training requires at least one sample")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise ValueError("training data contains non-finite values")

    spec = params.kernel
    from swarmsvr.kernels import KERNEL_CODES

    cache_rows = params.cache_rows if params.cache_rows is not None else min(n, DEFAULT_CACHE_ROWS)
    solve = solver if solver is not None else _backend.solve_dual
    beta, F, n_updates, gap = solve(
        X,
        y,
        params.c,
        params.epsilon,
        KERNEL_CODES[spec.family],
        spec.gamma,
        float(spec.degree),
        spec.offset,
        params.tol,
        params.max_passes * n,
        cache_rows,
    )
    if gap > params.tol:
        raise ConvergenceError(gap, n_updates)

    lo, hi = _feasibility_bounds(beta, F, params.c, params.epsilon)
    if not np.any(beta) and lo <= hi:
        # dual leaves b underdetermined; the mean is the best constant,
        # clipped so the optimality conditions stay satisfied
        bias = float(min(max(np.mean(y), lo), hi))
    else:
        bias = float((lo + hi) / 2.0)

    sv_mask = beta != 0.0
    backend_name = "custom" if solver is not None else _backend.solver_backend_name()
    return SvrModel(
        support_vectors=X[sv_mask].copy(),
        beta=beta[sv_mask].copy(),
        bias=bias,
        kernel=spec,
        sv_indices=np.flatnonzero(sv_mask),
        n_train=n,
        params=params,
        fit_info=FitInfo(n_updates=n_updates, gap=float(gap), n_sv=int(sv_mask.sum()), backend=backend_name),
        metadata=dict(metadata or {}),
    )


def _predict_one(model: SvrModel, x: np.ndarray) -> float:
    row = kernel_row(model.kernel, model.support_vectors, x)
    return float(row @ model.beta + model.bias)


def predict(model: SvrModel, x) -> float:
    """Predict a single sample: sum_i beta_i K(sv_i, x) + b."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or (model.support_vectors.shape[0] > 0 and x.shape[0] != model.support_vectors.shape[1]):
        raise ValueError(f"expected a vector of dimension {model.support_vectors.shape[1]}, got shape {x.shape}")
    return _predict_one(model, x)


def predict_batch(model: SvrModel, X) -> np.ndarray:
    """Row-wise predict; each row goes through the same path as predict."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {X.shape}")
    if X.shape[0] == 0:
        return np.empty(0)
    if model.support_vectors.shape[0] > 0 and X.shape[1] != model.support_vectors.shape[1]:
        raise ValueError(
            f"dimension mismatch: model expects {model.support_vectors.shape[1]} features, got {X.shape[1]}"
        )
    return np.array([_predict_one(model, X[i]) for i in range(X.shape[0])])


def full_beta(model: SvrModel) -> np.ndarray:
    """Coefficient vector over all training rows (zeros where no SV)."""
    beta = np.zeros(model.n_train)
    beta[model.sv_indices] = model.beta
    return beta


def kkt_violation(model: SvrModel, X, y, params: SvrParams) -> float:
    """Maximum optimality-condition violation over the training points.

    Includes the dual equality residual |sum(beta)|; 0 means exactly
    optimal.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    beta = full_beta(model)
    E = predict_batch(model, X) - y
    c, eps = params.c, params.epsilon

    viol = np.empty_like(E)
    at_zero = beta == 0.0
    at_up = beta == c
    at_lo = beta == -c
    pos = (beta > 0.0) & ~at_up
    neg = (beta < 0.0) & ~at_lo
    viol[at_zero] = np.maximum(0.0, np.abs(E[at_zero]) - eps)
    viol[pos] = np.abs(E[pos] + eps)
    viol[neg] = np.abs(E[neg] - eps)
    viol[at_up] = np.maximum(0.0, E[at_up] + eps)
    viol[at_lo] = np.maximum(0.0, eps - E[at_lo])
    return float(max(viol.max(), abs(beta.sum())))


def dual_objective(model: SvrModel, y) -> float:
    """Dual objective 0.5 b'Kb - y'b + eps*|b|_1 at the trained coefficients."""
    y = np.asarray(y, dtype=float)
    if model.beta.size == 0:
        return 0.0
    G = gram_matrix(model.kernel, model.support_vectors)
    b = model.beta
    y_sv = y[model.sv_indices]
    return float(0.5 * b @ G @ b - y_sv @ b + model.params.epsilon * np.sum(np.abs(b)))
