"""Particle Swarm Optimization over a box-bounded continuous space.

Velocity update per particle and dimension:

    v' = w*v + c1*rand_a*(pbest - x) + c2*rand_b*(gbest - x)
    x' = x + v'

with fresh uniform randoms per dimension, velocity clamped to a
fraction of the per-dimension range, and positions clamped to the box
(the velocity component is zeroed on a clamped dimension). The inertia
weight w is either constant or decays linearly over the run.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from swarmsvr._parallel import evaluate_all
from swarmsvr.spaces import SearchSpace

INERTIA_MODES = ("constant", "linear_decay")


@dataclass(frozen=True)
class PsoParams:
    population: int = 150
    iterations: int = 50
    c1: float = 1.0
    c2: float = 2.0
    inertia_mode: str = "constant"
    omega: float = 0.5
    omega_max: float = 0.9
    omega_min: float = 0.4
    v_max_fraction: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.population < 2:
            raise ValueError(f"population must be >= 2, got {self.population}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.inertia_mode not in INERTIA_MODES:
            raise ValueError(f"inertia_mode must be one of {INERTIA_MODES}, got {self.inertia_mode!r}")
        if not 0 < self.v_max_fraction <= 1:
            raise ValueError(f"v_max_fraction must be in (0, 1], got {self.v_max_fraction}")


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    pbest: np.ndarray
    pbest_fitness: float


@dataclass
class SwarmState:
    particles: list[Particle]
    gbest: np.ndarray
    gbest_fitness: float
    iteration: int
    rng: np.random.Generator


def inertia(params: PsoParams, t: int) -> float:
    """Inertia weight at iteration t (constant or linear decay)."""
    if params.inertia_mode == "constant":
        return params.omega
    return params.omega_max - t * (params.omega_max - params.omega_min) / params.iterations


def init_swarm(space: SearchSpace, params: PsoParams, objective) -> SwarmState:
    """Uniform positions in the box, velocities in +-v_max, all evaluated."""
    rng = np.random.default_rng(params.seed)
    lb, ub = space.lower_array, space.upper_array
    v_max = params.v_max_fraction * space.range_array
    positions = rng.uniform(lb, ub, size=(params.population, space.dim))
    velocities = rng.uniform(-v_max, v_max, size=(params.population, space.dim))
    fits = evaluate_all(objective, list(positions))
    particles = [
        Particle(position=p.copy(), velocity=v.copy(), pbest=p.copy(), pbest_fitness=f)
        for p, v, f in zip(positions, velocities, fits)
    ]
    best = int(np.argmin(fits))
    return SwarmState(
        particles=particles,
        gbest=particles[best].pbest.copy(),
        gbest_fitness=particles[best].pbest_fitness,
        iteration=0,
        rng=rng,
    )


def step(state: SwarmState, objective, space: SearchSpace, params: PsoParams) -> SwarmState:
    """Advance the swarm one iteration; pbest/gbest update after all evaluations."""
    lb, ub = space.lower_array, space.upper_array
    v_max = params.v_max_fraction * space.range_array
    w = inertia(params, state.iteration)
    pop = len(state.particles)
    rand_a = state.rng.uniform(size=(pop, space.dim))
    rand_b = state.rng.uniform(size=(pop, space.dim))

    for idx, p in enumerate(state.particles):
        v = (
            w * p.velocity
            + params.c1 * rand_a[idx] * (p.pbest - p.position)
            + params.c2 * rand_b[idx] * (state.gbest - p.position)
        )
        v = np.minimum(np.maximum(v, -v_max), v_max)
        x = p.position + v
        out = (x < lb) | (x > ub)
        x = np.minimum(np.maximum(x, lb), ub)
        v[out] = 0.0
        p.position = x
        p.velocity = v

    fits = evaluate_all(objective, [p.position for p in state.particles])
    for p, f in zip(state.particles, fits):
        if f < p.pbest_fitness:
            p.pbest = p.position.copy()
            p.pbest_fitness = f
    best = min(state.particles, key=lambda q: q.pbest_fitness)
    if best.pbest_fitness < state.gbest_fitness:
        state.gbest = best.pbest.copy()
        state.gbest_fitness = best.pbest_fitness
    state.iteration += 1
    return state


def optimize(objective, space: SearchSpace, params: PsoParams, trace_path=None):
    """Run init + T steps; returns (best position, best fitness, history).

    history[t] is the swarm-best fitness after t steps (length T + 1,
    non-increasing). trace_path, when given, receives CSV rows of
    (iteration, gbest_fitness, gbest components).
    """
    state = init_swarm(space, params, objective)
    history = [state.gbest_fitness]
    rows = [(0, state.gbest_fitness, *state.gbest)]
    for _ in range(params.iterations):
        step(state, objective, space, params)
        history.append(state.gbest_fitness)
        rows.append((state.iteration, state.gbest_fitness, *state.gbest))
    if trace_path is not None:
        _write_trace(trace_path, space, rows, fitness_label="gbest_fitness")
    return state.gbest.copy(), state.gbest_fitness, history


def _write_trace(path, space: SearchSpace, rows, fitness_label: str):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", fitness_label, *(space.label(i) for i in range(space.dim))])
        writer.writerows(rows)
