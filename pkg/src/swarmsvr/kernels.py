"""Kernel functions (linear, polynomial, RBF, sigmoid) and Gram matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FAMILIES = ("linear", "polynomial", "rbf", "sigmoid")

# integer codes shared with the compiled solver
KERNEL_CODES = {name: i for i, name in enumerate(FAMILIES)}


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus its parameters.

    gamma is the width/scale parameter, degree the polynomial exponent,
    offset the additive constant of the sigmoid kernel.
    """

    family: str = "rbf"
    gamma: float = 1.0
    degree: int = 3
    offset: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}, expected one of {FAMILIES}")
        if self.family in ("rbf", "polynomial", "sigmoid") and not self.gamma > 0:
            raise ValueError(f"{self.family} kernel requires gamma > 0, got {self.gamma}")
        if self.family == "polynomial" and not self.degree > 0:
            raise ValueError(f"polynomial kernel requires degree > 0, got {self.degree}")
        if self.family == "sigmoid" and not self.offset > 0:
            raise ValueError(f"sigmoid kernel requires offset > 0, got {self.offset}")

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "gamma": self.gamma,
            "degree": self.degree,
            "offset": self.offset,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "KernelSpec":
        return cls(
            family=d["family"],
            gamma=float(d["gamma"]),
            degree=int(d["degree"]),
            offset=float(d["offset"]),
        )


def kernel_eval(spec: KernelSpec, x1, x2) -> float:
    """Evaluate K(x1, x2) for a single pair of vectors."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != x2.shape or x1.ndim != 1:
        raise ValueError(f"kernel arguments must be 1-d vectors of equal length, got {x1.shape} and {x2.shape}")
    return float(kernel_row(spec, x1[np.newaxis, :], x2)[0])


def kernel_row(spec: KernelSpec, X: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Vector of K(X[i], x) for every row of X."""
    X = np.asarray(X, dtype=float)
    x = np.asarray(x, dtype=float)
    if X.ndim != 2 or x.shape != (X.shape[1],):
        raise ValueError(f"shape mismatch: X is {X.shape}, x is {x.shape}")
    if spec.family == "rbf":
        # squared distance accumulated directly; the expanded form
        # ||a||^2 + ||b||^2 - 2ab cancels catastrophically at small distances
        sq = np.sum((X - x) ** 2, axis=1)
        return np.exp(-spec.gamma * sq)
    dot = X @ x
    if spec.family == "linear":
        return dot
    if spec.family == "polynomial":
        return (dot + spec.gamma) ** spec.degree
    return np.tanh(spec.gamma * dot + spec.offset)


def gram_matrix(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    """Symmetric Gram matrix G[i, j] = K(X[i], X[j]).

    Each unordered pair is evaluated once and mirrored, so G equals its
    transpose bit for bit.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("X must be a non-empty 2-d matrix")
    n = X.shape[0]
    G = np.empty((n, n))
    for i in range(n):
        row = kernel_row(spec, X[i:], X[i])
        G[i, i:] = row
        G[i:, i] = row
    return G
