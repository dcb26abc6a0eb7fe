# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled core of the epsilon-SVR dual solver.

Statement-for-statement twin of swarmsvr._smo_py.solve; the algorithm
and the bit-equality constraints are documented there. Runs without the
GIL so callers can train models from worker threads concurrently.
"""

from libc.math cimport INFINITY, exp, pow, tanh

import numpy as np


cdef void _fill_row(const double[:, ::1] X, Py_ssize_t i, int kernel_code,
                    double gamma, double degree, double offset,
                    double[::1] out) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t dim = X.shape[1]
    cdef Py_ssize_t j, dd
    cdef double s, diff
    if kernel_code == 2:  # rbf
        for j in range(n):
            s = 0.0
            for dd in range(dim):
                diff = X[j, dd] - X[i, dd]
                s = s + diff * diff
            out[j] = exp(-gamma * s)
    elif kernel_code == 0:  # linear
        for j in range(n):
            s = 0.0
            for dd in range(dim):
                s = s + X[j, dd] * X[i, dd]
            out[j] = s
    elif kernel_code == 1:  # polynomial
        for j in range(n):
            s = 0.0
            for dd in range(dim):
                s = s + X[j, dd] * X[i, dd]
            out[j] = pow(s + gamma, degree)
    else:  # sigmoid
        for j in range(n):
            s = 0.0
            for dd in range(dim):
                s = s + X[j, dd] * X[i, dd]
            out[j] = tanh(gamma * s + offset)


cdef Py_ssize_t _get_row(const double[:, ::1] X, Py_ssize_t i, int kernel_code,
                         double gamma, double degree, double offset,
                         double[:, ::1] cache, Py_ssize_t[::1] slot_of_row,
                         Py_ssize_t[::1] row_of_slot, long long[::1] last_used,
                         long long* tick) noexcept nogil:
    """Slot index of row i in the cache, filling (LRU eviction) on miss."""
    cdef Py_ssize_t slots = cache.shape[0]
    cdef Py_ssize_t slot = slot_of_row[i]
    cdef Py_ssize_t k, victim
    cdef long long oldest
    if slot < 0:
        victim = 0
        oldest = last_used[0]
        for k in range(1, slots):
            if last_used[k] < oldest:
                oldest = last_used[k]
                victim = k
        if row_of_slot[victim] >= 0:
            slot_of_row[row_of_slot[victim]] = -1
        _fill_row(X, i, kernel_code, gamma, degree, offset, cache[victim])
        slot_of_row[i] = victim
        row_of_slot[victim] = i
        slot = victim
    tick[0] += 1
    last_used[slot] = tick[0]
    return slot


def solve(X, y, double c, double epsilon, int kernel_code, double gamma,
          double degree, double offset, double tol, long long max_updates,
          Py_ssize_t cache_rows):
    """Run the dual solver; returns (beta, F, n_updates, gap)."""
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    yc = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0]

    beta_arr = np.zeros(n)
    F_arr = -yc.copy()
    cdef double[::1] beta = beta_arr
    cdef double[::1] F = F_arr

    if cache_rows < 2:
        cache_rows = 2
    if cache_rows > n:
        cache_rows = n
    cache_arr = np.empty((cache_rows, n))
    cdef double[:, ::1] cache = cache_arr
    cdef Py_ssize_t[::1] slot_of_row = np.full(n, -1, dtype=np.intp)
    cdef Py_ssize_t[::1] row_of_slot = np.full(cache_rows, -1, dtype=np.intp)
    cdef long long[::1] last_used = np.zeros(cache_rows, dtype=np.int64)
    cdef long long tick = 0

    cdef long long n_updates = 0
    cdef double gap = INFINITY
    cdef Py_ssize_t i, j, k, slot_i, slot_j
    cdef double best_up, best_down, v
    cdef double beta_i, beta_j, eta, d0, t_hi_i, t_hi_j, t_max
    cdef double b1, b2, s_i, s_j, t0, t_star, q, gp0, seg_end, t_root
    cdef double new_i, new_j, dbi, dbj
    cdef double[::1] row_i, row_j

    with nogil:
        while True:
            best_up = INFINITY
            i = 0
            for k in range(n):
                if beta[k] < c:
                    v = F[k] + (epsilon if beta[k] >= 0.0 else -epsilon)
                    if v < best_up:
                        best_up = v
                        i = k
            best_down = -INFINITY
            j = 0
            for k in range(n):
                if beta[k] > -c:
                    v = F[k] + (epsilon if beta[k] > 0.0 else -epsilon)
                    if v > best_down:
                        best_down = v
                        j = k
            gap = best_down - best_up
            if gap <= tol or n_updates >= max_updates:
                break

            slot_i = _get_row(Xv, i, kernel_code, gamma, degree, offset,
                              cache, slot_of_row, row_of_slot, last_used, &tick)
            slot_j = _get_row(Xv, j, kernel_code, gamma, degree, offset,
                              cache, slot_of_row, row_of_slot, last_used, &tick)
            row_i = cache[slot_i]
            row_j = cache[slot_j]
            beta_i = beta[i]
            beta_j = beta[j]
            eta = row_i[i] + row_j[j] - 2.0 * row_i[j]
            d0 = F[i] - F[j]
            t_hi_i = c - beta_i
            t_hi_j = beta_j + c
            t_max = t_hi_i if t_hi_i <= t_hi_j else t_hi_j

            b1 = -beta_i if beta_i < 0.0 else INFINITY
            b2 = beta_j if beta_j > 0.0 else INFINITY
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
                    b1 = INFINITY
                if seg_end == b2:
                    s_j = -1.0
                    b2 = INFINITY

            if t_star >= t_max:
                new_i = c if t_hi_i <= t_hi_j else beta_i + t_max
                new_j = -c if t_hi_j <= t_hi_i else beta_j - t_max
            else:
                new_i = beta_i + t_star
                new_j = beta_j - t_star
            dbi = new_i - beta_i
            dbj = new_j - beta_j
            beta[i] = new_i
            beta[j] = new_j
            for k in range(n):
                F[k] = F[k] + (dbi * row_i[k] + dbj * row_j[k])
            n_updates += 1

    return beta_arr, F_arr, int(n_updates), float(gap)
