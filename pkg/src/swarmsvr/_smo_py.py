"""Pure-Python fallback for the epsilon-SVR dual solver.

Solves, in the coefficient-difference variable b[i] = alpha_i - alpha*_i,

    minimize  0.5 * b'Kb - y'b + epsilon * sum(|b_i|)
    subject to  sum(b_i) = 0,  -C <= b_i <= C

by sequential two-variable coordinate optimization: the working pair is
the maximal violating pair of the optimality conditions, and the step
along the pair direction is minimized exactly (the objective restricted
to the direction is piecewise quadratic with at most two kinks where a
coefficient crosses zero).

This module must stay arithmetically identical to the compiled solver
in _smo.pyx: same operation order, scalar libm transcendentals, no
fused multiply-adds. The twin-backend test asserts bit-equal results.
"""

from __future__ import annotations

import math
from collections import OrderedDict

import numpy as np

INF = float("inf")


def _row_function(X, kernel_code, gamma, degree, offset):
    """Kernel row k(X[j], X[i]) for all j, dimension-major accumulation."""
    n, dim = X.shape
    cols = [np.ascontiguousarray(X[:, dd]) for dd in range(dim)]

    def row(i):
        xi = X[i]
        if kernel_code == 2:  # rbf
            s = np.zeros(n)
            for dd in range(dim):
                diff = cols[dd] - xi[dd]
                s += diff * diff
            t = -gamma * s
            return np.fromiter((math.exp(v) for v in t), dtype=float, count=n)
        s = np.zeros(n)
        for dd in range(dim):
            s += cols[dd] * xi[dd]
        if kernel_code == 0:  # linear
            return s
        if kernel_code == 1:  # polynomial
            t = s + gamma
            deg = float(degree)
            return np.fromiter((math.pow(v, deg) for v in t), dtype=float, count=n)
        t = gamma * s + offset  # sigmoid
        return np.fromiter((math.tanh(v) for v in t), dtype=float, count=n)

    return row


def solve(X, y, c, epsilon, kernel_code, gamma, degree, offset, tol, max_updates, cache_rows):
    """Run the dual solver; returns (beta, F, n_updates, gap).

    F is the final smooth gradient F_i = (Kb)_i - y_i; gap the final
    violating-pair gap (<= tol means converged).
    """
    X = np.ascontiguousarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    cache_rows = max(2, min(cache_rows, n))
    beta = np.zeros(n)
    F = -y.copy()
    row_of = _row_function(X, kernel_code, gamma, degree, offset)

    cache: OrderedDict[int, np.ndarray] = OrderedDict()

    def get_row(i):
        if i in cache:
            cache.move_to_end(i)
            return cache[i]
        r = row_of(i)
        if len(cache) >= cache_rows:
            cache.popitem(last=False)
        cache[i] = r
        return r

    n_updates = 0
    gap = INF
    while True:
        up = F + np.where(beta >= 0.0, epsilon, -epsilon)
        up = np.where(beta < c, up, INF)
        down = F + np.where(beta > 0.0, epsilon, -epsilon)
        down = np.where(beta > -c, down, -INF)
        i = int(np.argmin(up))
        j = int(np.argmax(down))
        gap = down[j] - up[i]
        if gap <= tol or n_updates >= max_updates:
            break

        row_i = get_row(i)
        row_j = get_row(j)
        beta_i = beta[i]
        beta_j = beta[j]
        eta = row_i[i] + row_j[j] - 2.0 * row_i[j]
        d0 = F[i] - F[j]
        t_hi_i = c - beta_i
        t_hi_j = beta_j + c
        t_max = t_hi_i if t_hi_i <= t_hi_j else t_hi_j

        # exact minimization of the piecewise quadratic along the pair
        # direction (beta_i + t, beta_j - t); kinks where either
        # coefficient crosses zero flip the sign of its epsilon term
        b1 = -beta_i if beta_i < 0.0 else INF
        b2 = beta_j if beta_j > 0.0 else INF
        s_i = 1.0 if beta_i >= 0.0 else -1.0
        s_j = 1.0 if beta_j > 0.0 else -1.0
        t0 = 0.0
        t_star = t_max
        while True:
            q = d0 + epsilon * s_i - epsilon * s_j
            gp0 = eta * t0 + q
            if gp0 >= 0.0:
                t_star = t0
                break
            seg_end = b1 if b1 < b2 else b2
            if t_max < seg_end:
                seg_end = t_max
            if eta > 0.0:
                t_root = -q / eta
                if t_root <= seg_end:
                    t_star = t_root
                    break
            if seg_end >= t_max:
                t_star = t_max
                break
            t0 = seg_end
            if seg_end == b1:
                s_i = 1.0
                b1 = INF
            if seg_end == b2:
                s_j = -1.0
                b2 = INF

        if t_star >= t_max:
            # snap to the box so bound feasibility tests stay exact
            new_i = c if t_hi_i <= t_hi_j else beta_i + t_max
            new_j = -c if t_hi_j <= t_hi_i else beta_j - t_max
        else:
            new_i = beta_i + t_star
            new_j = beta_j - t_star
        dbi = new_i - beta_i
        dbj = new_j - beta_j
        beta[i] = new_i
        beta[j] = new_j
        F += dbi * row_i + dbj * row_j
        n_updates += 1

    return beta, F, n_updates, float(gap)
