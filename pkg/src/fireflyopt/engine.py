"""The standard firefly algorithm.

Generation semantics (asynchronous, in-place):

* brightness values are frozen at the start of a generation;
* firefly ``i`` visits every ``j`` in index order and moves toward ``j``
  when ``j``'s frozen brightness is strictly lower, starting each move
  from its own current position and aiming at ``j``'s frozen position;
* afterwards ``i`` is evaluated once and keeps the new position only if it
  is no worse than where it started the generation.

Random draws: each executed (i, j) move consumes ``dimension`` standard
normals, in i-major, j-minor order. Skipped pairs draw nothing.
Because ``j`` is always read from the frozen snapshot, the movers are
independent of one another and are advanced together, one ``j`` at a time,
using a block of normals drawn up front in that same order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional

import numpy as np

from .core import (
    BOUNDARY_HANDLING,
    BudgetExhausted,
    ConfigurationError,
    DimensionError,
    Evaluator,
    FaParams,
    Firefly,
    ParameterError,
    Problem,
    RngStream,
    clamp_to_bounds,
)

__all__ = [
    "DistanceMetric",
    "EUCLIDEAN",
    "HAMMING",
    "Population",
    "Termination",
    "RunResult",
    "attractiveness",
    "pairwise_distance",
    "move_firefly",
    "alpha_schedule",
    "estimate_gamma",
    "initialize_population",
    "step_generation",
    "run",
]

NOISE_MODES = ("additive", "multiplicative")


class DistanceMetric:
    """Distance between two positions.

    ``kind`` is one of ``"euclidean"``, ``"hamming"`` or ``"custom-delay"``.
    A custom metric wraps a user function ``f(a, b) -> float >= 0``.
    """

    def __init__(self, kind: str, func: Optional[Callable] = None):
        if kind not in ("euclidean", "hamming", "custom-delay"):
            raise ConfigurationError(f"unknown metric kind {kind!r}")
        if kind == "custom-delay" and func is None:
            raise ConfigurationError("custom metric needs a distance function")
        self.kind = kind
        self._func = func

    @classmethod
    def custom(cls, func: Callable) -> "DistanceMetric":
        return cls("custom-delay", func)

    def batch(self, points: np.ndarray, target: np.ndarray) -> np.ndarray:
        """Distances from each row of ``points`` to ``target``."""
        if points.shape[-1] != target.shape[-1]:
            raise DimensionError(
                f"cannot compare vectors of length {points.shape[-1]} and "
                f"{target.shape[-1]}"
            )
        if self.kind == "euclidean":
            diff = points - target
            return np.sqrt(np.sum(diff * diff, axis=-1))
        if self.kind == "hamming":
            return np.count_nonzero(points != target, axis=-1).astype(float)
        return np.array([float(self._func(p, target)) for p in points])

    def __call__(self, a, b) -> float:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.shape != b.shape:
            raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
        return float(self.batch(a[None, :], b)[0])

    def __repr__(self):
        return f"DistanceMetric({self.kind!r})"


EUCLIDEAN = DistanceMetric("euclidean")
HAMMING = DistanceMetric("hamming")


def attractiveness(beta0, gamma, r):
    """``beta0 * exp(-gamma * r**2)``; works elementwise on arrays."""
    return beta0 * np.exp(-gamma * r**2)


def pairwise_distance(a, b, metric: DistanceMetric = EUCLIDEAN) -> float:
    return metric(a, b)


def alpha_schedule(alpha0: float, theta: float, t: int) -> float:
    """Randomness strength after ``t`` reductions: ``alpha0 * theta**t``.

    Evaluated as ``t`` successive multiplications so that
    ``alpha_schedule(a, th, t + 1) == th * alpha_schedule(a, th, t)`` holds
    exactly in floating point, matching the engine's per-generation update.
    """
    if not (0.0 < theta < 1.0):
        raise ParameterError(f"theta must lie in (0, 1), got {theta}")
    if alpha0 < 0:
        raise ParameterError("alpha0 must be nonnegative")
    if t < 0:
        raise ParameterError("t must be nonnegative")
    alpha = float(alpha0)
    for _ in range(int(t)):
        alpha = theta * alpha
    return alpha


def estimate_gamma(problem: Problem) -> float:
    """``1 / L**2`` with ``L`` the mean per-dimension domain width.

    The mean is formed exactly and rounded once, so equal widths give back
    ``L`` itself and ``influence_radius`` recovers it to within one ulp.
    """
    widths = problem.upper_bounds - problem.lower_bounds
    scale = float(sum(map(Fraction, widths.tolist())) / widths.size)
    if not scale > 0:
        raise ParameterError("domain has zero width; cannot estimate gamma")
    return 1.0 / (scale * scale)


def _noise(xi, eps, alpha_t, step, noise):
    # step is alpha_t * widths, precomputed so batch and scalar paths agree bitwise
    if noise == "additive":
        return step * eps
    return alpha_t * (eps * xi)


def move_firefly(
    xi,
    xj,
    params: FaParams,
    alpha_t: float,
    rng: RngStream,
    problem: Problem,
    metric: DistanceMetric = EUCLIDEAN,
    noise: str = "additive",
) -> np.ndarray:
    """Move ``xi`` toward the brighter ``xj``.

    Returns ``clamp(xi + beta(r) * (xj - xi) + alpha_t * width * eps)``
    where ``eps`` is one fresh standard normal per dimension. With
    ``noise="multiplicative"`` the last term becomes ``alpha_t * (eps * xi)``.
    """
    xi = np.asarray(xi, dtype=float)
    xj = np.asarray(xj, dtype=float)
    if xi.shape != xj.shape or xi.shape[-1] != problem.dimension:
        raise DimensionError("xi, xj and the problem must share one dimension")
    if noise not in NOISE_MODES:
        raise ConfigurationError(f"unknown noise mode {noise!r}")
    gamma = params.gamma if params.gamma is not None else estimate_gamma(problem)
    r = metric.batch(xi[None, :], xj)[0]
    beta = attractiveness(params.beta0, gamma, r)
    eps = rng.normal(problem.dimension)
    step = alpha_t * problem.widths
    moved = xi + beta * (xj - xi) + _noise(xi, eps, alpha_t, step, noise)
    return clamp_to_bounds(moved, problem)


@dataclass
class Population:
    """Positions ``(n, d)``, cached fitness ``(n,)`` and the best-so-far record.

    The best-so-far record is for reporting only; the update rule never
    reads it.
    """

    positions: np.ndarray
    fitness: np.ndarray
    generation: int = 0
    best_position: Optional[np.ndarray] = None
    best_fitness: float = math.inf
    budget_exhausted: bool = False

    def __post_init__(self):
        self.positions = np.array(self.positions, dtype=float, ndmin=2)
        self.fitness = np.array(self.fitness, dtype=float).ravel()
        if self.positions.shape[0] != self.fitness.size:
            raise DimensionError("one fitness value per firefly is required")
        if self.best_position is None and self.fitness.size:
            self._update_best()

    def _update_best(self):
        k = int(np.argmin(self.fitness))
        if self.fitness[k] < self.best_fitness:
            self.best_fitness = float(self.fitness[k])
            self.best_position = self.positions[k].copy()

    @property
    def size(self) -> int:
        return self.fitness.size

    @property
    def fireflies(self) -> List[Firefly]:
        return [Firefly(p.copy(), float(f)) for p, f in zip(self.positions, self.fitness)]

    def copy(self) -> "Population":
        return Population(
            self.positions.copy(),
            self.fitness.copy(),
            self.generation,
            None if self.best_position is None else self.best_position.copy(),
            self.best_fitness,
            self.budget_exhausted,
        )


def initialize_population(
    problem: Problem,
    n: int,
    rng: RngStream,
    evaluator: Evaluator,
    positions=None,
) -> Population:
    """Uniform random start (or the given ``positions``), fully evaluated."""
    if positions is None:
        positions = rng.uniform_in(
            problem.lower_bounds, problem.upper_bounds, (n, problem.dimension)
        )
    else:
        positions = clamp_to_bounds(np.array(positions, dtype=float, ndmin=2), problem)
        if positions.shape[0] != n:
            raise ConfigurationError(
                f"{positions.shape[0]} initial positions given for n={n}"
            )
    fitness = np.array([evaluator(p) for p in positions])
    return Population(positions, fitness)


def brighter_pairs(fitness: np.ndarray) -> np.ndarray:
    """Boolean ``(n, n)`` matrix; entry ``[i, j]`` is True when j outshines i."""
    return fitness[None, :] < fitness[:, None]


def step_generation(
    pop: Population,
    problem: Problem,
    params: FaParams,
    rng: RngStream,
    evaluator: Optional[Evaluator] = None,
    metric: DistanceMetric = EUCLIDEAN,
    noise: str = "additive",
    alpha_t: Optional[float] = None,
) -> Population:
    """Advance the population by one generation; the input is not modified."""
    if noise not in NOISE_MODES:
        raise ConfigurationError(f"unknown noise mode {noise!r}")
    if evaluator is None:
        evaluator = Evaluator(problem)
    gamma = params.gamma if params.gamma is not None else estimate_gamma(problem)
    if alpha_t is None:
        alpha_t = alpha_schedule(params.alpha0, params.theta, pop.generation)

    start_x = pop.positions
    start_f = pop.fitness
    n, dim = start_x.shape
    current = start_x.copy()

    attracted = brighter_pairs(start_f)
    n_moves = int(attracted.sum())
    if n_moves:
        # draw row for move (i, j) is its rank in i-major order
        draw_row = (np.cumsum(attracted.ravel()) - 1).reshape(n, n)
        eps = rng.normal((n_moves, dim))
        step = alpha_t * problem.widths
        for j in range(n):
            movers = np.flatnonzero(attracted[:, j])
            if movers.size == 0:
                continue
            xi = current[movers]
            xj = start_x[j]
            r = metric.batch(xi, xj)
            beta = attractiveness(params.beta0, gamma, r)[:, None]
            e = eps[draw_row[movers, j]]
            moved = xi + beta * (xj - xi) + _noise(xi, e, alpha_t, step, noise)
            current[movers] = clamp_to_bounds(moved, problem)

    new_x = start_x.copy()
    new_f = start_f.copy()
    exhausted = False
    for i in range(n):
        try:
            f = evaluator(current[i])
        except BudgetExhausted:
            exhausted = True
            break
        if f <= start_f[i]:
            new_x[i] = current[i]
            new_f[i] = f

    out = Population(
        new_x,
        new_f,
        pop.generation + 1,
        None if pop.best_position is None else pop.best_position.copy(),
        pop.best_fitness,
        exhausted,
    )
    out._update_best()
    return out


@dataclass(frozen=True)
class Termination:
    """Stopping rules; ``max_generations=None`` defers to the parameters."""

    max_generations: Optional[int] = None
    target_fitness: Optional[float] = None
    max_evaluations: Optional[int] = None


HISTORY_COLUMNS = ("generation", "best", "mean", "worst", "alpha", "evaluations")


@dataclass
class RunResult:
    best_position: np.ndarray
    best_fitness: float
    history: np.ndarray  # rows follow HISTORY_COLUMNS
    evaluations: int
    seed: int
    params: dict
    final_population: Population
    termination_reason: str
    problem_name: str = "custom"
    metric: str = "euclidean"
    noise: str = "additive"
    boundary_handling: str = BOUNDARY_HANDLING
    snapshots: List[Population] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "problem": self.problem_name,
            "seed": self.seed,
            "best_position": self.best_position.tolist(),
            "best_fitness": self.best_fitness,
            "evaluations": self.evaluations,
            "generations": int(self.final_population.generation),
            "termination": self.termination_reason,
            "params": dict(self.params),
            "metric": self.metric,
            "noise": self.noise,
            "boundary_handling": self.boundary_handling,
        }


def _history_row(pop: Population, alpha: float, evaluations: int):
    return (
        pop.generation,
        pop.best_fitness,
        float(np.mean(pop.fitness)),
        float(np.max(pop.fitness)),
        alpha,
        evaluations,
    )


def run(
    problem: Problem,
    params: FaParams,
    seed: int,
    termination: Optional[Termination] = None,
    metric: DistanceMetric = EUCLIDEAN,
    noise: str = "additive",
    initial_positions=None,
    snapshot_every: Optional[int] = None,
) -> RunResult:
    """Run the firefly algorithm from a seeded uniform start.

    Parameters
    ----------
    problem : Problem
    params : FaParams
        ``gamma=None`` is replaced by :func:`estimate_gamma`.
    seed : int
        Sole source of randomness for the run.
    termination : Termination, optional
        Generation cap, target fitness and evaluation budget.
    snapshot_every : int, optional
        Keep a copy of the population every this many generations
        (generation 0 and the final generation are always included).
    """
    termination = termination or Termination()
    params = params.resolve(problem)
    if noise not in NOISE_MODES:
        raise ConfigurationError(f"unknown noise mode {noise!r}")
    max_gen = termination.max_generations
    if max_gen is None:
        max_gen = params.max_generations
    if max_gen < 0:
        raise ParameterError("max_generations must be nonnegative")
    budget = termination.max_evaluations
    if budget is not None and budget < params.population_size:
        raise ConfigurationError(
            "evaluation budget is smaller than the initial population"
        )
    if snapshot_every is not None and snapshot_every < 1:
        raise ConfigurationError("snapshot_every must be positive")

    rng = RngStream(seed)
    evaluator = Evaluator(problem, budget)
    pop = initialize_population(
        problem, params.population_size, rng, evaluator, initial_positions
    )
    alpha = float(params.alpha0)
    history = [_history_row(pop, alpha, evaluator.count)]
    snapshots = [pop.copy()] if snapshot_every else []

    reason = "max_generations"
    target = termination.target_fitness
    while True:
        if target is not None and pop.best_fitness <= target:
            reason = "target_fitness"
            break
        if pop.generation >= max_gen:
            break
        if evaluator.remaining == 0:
            reason = "evaluation_budget"
            break
        pop = step_generation(
            pop, problem, params, rng, evaluator, metric, noise, alpha_t=alpha
        )
        alpha = params.theta * alpha
        history.append(_history_row(pop, alpha, evaluator.count))
        if snapshot_every and pop.generation % snapshot_every == 0:
            snapshots.append(pop.copy())
        if pop.budget_exhausted:
            reason = "evaluation_budget"
            break

    if snapshot_every and snapshots[-1].generation != pop.generation:
        snapshots.append(pop.copy())

    return RunResult(
        best_position=pop.best_position.copy(),
        best_fitness=pop.best_fitness,
        history=np.array(history, dtype=float),
        evaluations=evaluator.count,
        seed=int(seed),
        params=params.as_dict(),
        final_population=pop,
        termination_reason=reason,
        problem_name=problem.name,
        metric=metric.kind,
        noise=noise,
        snapshots=snapshots,
    )
