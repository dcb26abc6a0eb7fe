"""Evaluation metrics: coefficient of determination, RMSE, MAE."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class UndefinedR2Error(ValueError):
    """Raised when y_true is constant and R-squared has no defined value.

    Carries the partial report (RMSE/MAE computed, r2 = None).
    """

    def __init__(self, partial: "EvalReport"):
        super().__init__("R-squared is undefined for a constant target")
        self.partial = partial


@dataclass(frozen=True)
class EvalReport:
    r2: float | None
    rmse: float
    mae: float
    n: int

    def to_dict(self, display_digits: int | None = None) -> dict:
        d = {"r2": self.r2, "rmse": self.rmse, "mae": self.mae, "n": self.n}
        if display_digits is not None:
            for k in ("r2", "rmse", "mae"):
                if d[k] is not None:
                    d[k] = round(d[k], display_digits)
        return d


def evaluate(y_true, y_pred) -> EvalReport:
    """Score predictions against observations.

    R2 = 1 - sum((y - y_pred)^2) / sum((y - mean(y))^2), RMSE the root
    mean squared residual, MAE the mean absolute residual.
    """
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ValueError(f"length mismatch: y_true {y_true.shape}, y_pred {y_pred.shape}")
    n = y_true.size
    if n == 0:
        raise ValueError("cannot evaluate empty vectors")
    resid = y_true - y_pred
    rmse = float(np.sqrt(np.mean(resid**2)))
    mae = float(np.mean(np.abs(resid)))
    ss_tot = float(np.sum((y_true - y_true.mean()) ** 2))
    if ss_tot == 0.0:
        raise UndefinedR2Error(EvalReport(r2=None, rmse=rmse, mae=mae, n=n))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot
    return EvalReport(r2=r2, rmse=rmse, mae=mae, n=n)
