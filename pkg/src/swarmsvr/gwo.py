"""Grey Wolf Optimization over a box-bounded continuous space.

Three ranked leaders (alpha, beta, delta) pull every wolf: per wolf,
leader, and dimension, with fresh uniforms r1, r2,

    A = 2*a*r1 - a,  C = 2*r2,  D = |C*x_leader - x|
    x_leader' = x_leader - A*D

and the wolf moves to the average of the three pulled points, clamped
to the box. The exploration coefficient a decreases linearly from 2 to
0 over the run. Leaders are retained elitically: replaced only by a
strictly better candidate, so the alpha history never worsens.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from swarmsvr._parallel import evaluate_all
from swarmsvr.pso import _write_trace
from swarmsvr.spaces import SearchSpace


@dataclass(frozen=True)
class GwoParams:
    population: int = 150
    iterations: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.population < 3:
            raise ValueError(f"population must be >= 3 (three leaders), got {self.population}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")


@dataclass
class Leader:
    position: np.ndarray
    fitness: float


@dataclass
class PackState:
    wolves: list[np.ndarray]
    fitness: list[float]
    alpha: Leader
    beta: Leader
    delta: Leader
    iteration: int
    rng: np.random.Generator


def coefficient_a(t: int, iterations: int) -> float:
    """Exploration coefficient, linear from 2 at t=0 to 0 at t=iterations."""
    return 2.0 - 2.0 * t / iterations


def init_pack(space: SearchSpace, params: GwoParams, objective) -> PackState:
    rng = np.random.default_rng(params.seed)
    positions = rng.uniform(space.lower_array, space.upper_array, size=(params.population, space.dim))
    fits = evaluate_all(objective, list(positions))
    order = np.argsort(fits, kind="stable")
    leaders = [Leader(positions[k].copy(), fits[k]) for k in order[:3]]
    return PackState(
        wolves=[p.copy() for p in positions],
        fitness=list(fits),
        alpha=leaders[0],
        beta=leaders[1],
        delta=leaders[2],
        iteration=0,
        rng=rng,
    )


def _rank(state: PackState):
    """Elitist cascade: a leader is displaced only by a strictly better wolf."""
    for pos, f in zip(state.wolves, state.fitness):
        if f < state.alpha.fitness:
            state.delta = state.beta
            state.beta = state.alpha
            state.alpha = Leader(pos.copy(), f)
        elif f < state.beta.fitness:
            state.delta = state.beta
            state.beta = Leader(pos.copy(), f)
        elif f < state.delta.fitness:
            state.delta = Leader(pos.copy(), f)


def step(state: PackState, objective, space: SearchSpace, params: GwoParams) -> PackState:
    lb, ub = space.lower_array, space.upper_array
    a = coefficient_a(state.iteration, params.iterations)
    leaders = (state.alpha, state.beta, state.delta)

    new_wolves = []
    for x in state.wolves:
        pulled = []
        for leader in leaders:
            r1 = state.rng.uniform(size=space.dim)
            r2 = state.rng.uniform(size=space.dim)
            coef_a = 2.0 * a * r1 - a
            coef_c = 2.0 * r2
            dist = np.abs(coef_c * leader.position - x)
            pulled.append(leader.position - coef_a * dist)
        # averaged via deviations from the first point so coincident
        # leaders are an exact fixed point in floating point
        avg = pulled[0] + ((pulled[1] - pulled[0]) + (pulled[2] - pulled[0])) / 3.0
        new_wolves.append(np.minimum(np.maximum(avg, lb), ub))

    state.wolves = new_wolves
    state.fitness = evaluate_all(objective, new_wolves)
    _rank(state)
    state.iteration += 1
    return state


def optimize(objective, space: SearchSpace, params: GwoParams, trace_path=None):
    """Run init + T steps; returns (best position, best fitness, history)."""
    state = init_pack(space, params, objective)
    history = [state.alpha.fitness]
    rows = [(0, state.alpha.fitness, *state.alpha.position)]
    for _ in range(params.iterations):
        step(state, objective, space, params)
        history.append(state.alpha.fitness)
        rows.append((state.iteration, state.alpha.fitness, *state.alpha.position))
    if trace_path is not None:
        _write_trace(trace_path, space, rows, fitness_label="alpha_fitness")
    return state.alpha.position.copy(), state.alpha.fitness, history
