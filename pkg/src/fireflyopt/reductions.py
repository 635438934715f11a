"""Special cases of the firefly update and a trajectory equivalence checker.

Setting ``gamma = 0`` removes the distance decay; with ``alpha = 0`` as well
the move is a DE-style difference step without crossover. Replacing the
attracting firefly with the population best gives an APSO-style update.
Setting ``beta0 = 0`` leaves a random walk whose strength follows the alpha
schedule (SA-like), and making that noise proportional to the position
gives harmony-search pitch adjustment.

The standalone optimizers below reuse the engine's generation skeleton
(frozen brightness, in-place movers, greedy acceptance) but not its code,
so a bit-exact match of trajectories is a real check. Expressions are
written in the same order as the engine's (attraction term, then noise).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

from .core import (
    ConfigurationError,
    Evaluator,
    FaParams,
    Problem,
    RngStream,
    clamp_to_bounds,
)
from .engine import initialize_population, step_generation

__all__ = [
    "VARIANTS",
    "ReductionConfig",
    "EquivalenceReport",
    "de_like_update",
    "apso_update",
    "sa_like_update",
    "hs_pitch_update",
    "run_reduction",
    "run_engine_trajectory",
    "verify_reduction",
]

VARIANTS = ("de_like", "apso", "sa_like", "hs_pitch")


def de_like_update(xi, xj, beta0):
    xi = np.asarray(xi, dtype=float)
    xj = np.asarray(xj, dtype=float)
    return xi + beta0 * (xj - xi)


def apso_update(xi, gstar, beta0, alpha, rng: RngStream, scale=None):
    """Step toward the group best plus Gaussian noise.

    ``scale`` (per-dimension widths) reproduces the engine's domain-scaled
    noise; without it the noise is ``alpha * eps``.
    """
    xi = np.asarray(xi, dtype=float)
    gstar = np.asarray(gstar, dtype=float)
    eps = rng.normal(xi.size)
    step = alpha if scale is None else alpha * np.asarray(scale, dtype=float)
    return xi + beta0 * (gstar - xi) + step * eps


def sa_like_update(xi, alpha_t, rng: RngStream, scale=None):
    xi = np.asarray(xi, dtype=float)
    eps = rng.normal(xi.size)
    step = alpha_t if scale is None else alpha_t * np.asarray(scale, dtype=float)
    return xi + step * eps


def hs_pitch_update(xi, alpha_t, rng: RngStream):
    xi = np.asarray(xi, dtype=float)
    eps = rng.normal(xi.size)
    return xi + alpha_t * (eps * xi)


@dataclass(frozen=True)
class ReductionConfig:
    """Which special case to check and the engine parameters inducing it."""

    variant: str
    params: FaParams
    seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigurationError(
                f"unknown reduction {self.variant!r}; choose from {VARIANTS}"
            )
        p = self.params
        if self.variant in ("de_like", "apso") and p.gamma != 0:
            raise ConfigurationError(f"{self.variant} requires gamma = 0")
        if self.variant == "de_like" and p.alpha0 != 0:
            raise ConfigurationError("de_like requires alpha0 = 0")
        if self.variant in ("sa_like", "hs_pitch") and p.beta0 != 0:
            raise ConfigurationError(f"{self.variant} requires beta0 = 0")

    @property
    def engine_noise(self) -> str:
        return "multiplicative" if self.variant == "hs_pitch" else "additive"


def _reduction_generation(x, f, problem, evaluator, move: Callable, variant: str):
    n = x.shape[0]
    current = x.copy()
    if variant == "apso":
        best = int(np.argmin(f))
        gstar = x[best]
        for i in range(n):
            if f[best] < f[i]:
                current[i] = clamp_to_bounds(move(current[i], gstar), problem)
    else:
        for i in range(n):
            xi = current[i]
            for j in range(n):
                if f[j] < f[i]:
                    xi = clamp_to_bounds(move(xi, x[j]), problem)
            current[i] = xi
    new_x = x.copy()
    new_f = f.copy()
    for i in range(n):
        value = evaluator(current[i])
        if value <= f[i]:
            new_x[i] = current[i]
            new_f[i] = value
    return new_x, new_f


def run_reduction(
    config: ReductionConfig, problem: Problem, steps: int, initial_positions=None
) -> List[np.ndarray]:
    """Trajectory of the standalone special-case optimizer.

    Returns ``steps + 1`` position arrays, starting with the initial swarm.
    """
    params = config.params
    rng = RngStream(config.seed)
    evaluator = Evaluator(problem)
    pop = initialize_population(
        problem, params.population_size, rng, evaluator, initial_positions
    )
    x, f = pop.positions.copy(), pop.fitness.copy()
    widths = problem.widths
    alpha = float(params.alpha0)
    trajectory = [x.copy()]
    for _ in range(steps):
        a = alpha
        if config.variant == "de_like":
            move = lambda xi, xj: de_like_update(xi, xj, params.beta0)
        elif config.variant == "apso":
            move = lambda xi, g: apso_update(xi, g, params.beta0, a, rng, widths)
        elif config.variant == "sa_like":
            move = lambda xi, _: sa_like_update(xi, a, rng, widths)
        else:
            move = lambda xi, _: hs_pitch_update(xi, a, rng)
        x, f = _reduction_generation(x, f, problem, evaluator, move, config.variant)
        alpha = params.theta * alpha
        trajectory.append(x.copy())
    return trajectory


def run_engine_trajectory(
    config: ReductionConfig, problem: Problem, steps: int, initial_positions=None
) -> List[np.ndarray]:
    params = config.params.resolve(problem)
    rng = RngStream(config.seed)
    evaluator = Evaluator(problem)
    pop = initialize_population(
        problem, params.population_size, rng, evaluator, initial_positions
    )
    alpha = float(params.alpha0)
    trajectory = [pop.positions.copy()]
    for _ in range(steps):
        pop = step_generation(
            pop, problem, params, rng, evaluator,
            noise=config.engine_noise, alpha_t=alpha,
        )
        alpha = params.theta * alpha
        trajectory.append(pop.positions.copy())
    return trajectory


@dataclass
class EquivalenceReport:
    variant: str
    seed: int
    steps: int
    max_abs_difference: List[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(d == 0.0 for d in self.max_abs_difference)

    def as_dict(self) -> dict:
        return {
            "record": "reduction_equivalence",
            "variant": self.variant,
            "seed": self.seed,
            "steps": self.steps,
            "max_abs_difference": self.max_abs_difference,
            "result": "PASS" if self.passed else "FAIL",
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def verify_reduction(
    config: ReductionConfig,
    problem: Problem,
    steps: int,
    initial_positions=None,
) -> EquivalenceReport:
    """Run engine and standalone reduction from one seed and compare.

    The report lists, for each step (step 0 is the shared initial swarm),
    the largest componentwise absolute difference between the two
    trajectories. It passes only when every entry is exactly zero.
    """
    if steps < 0:
        raise ConfigurationError("steps must be nonnegative")
    ours = run_reduction(config, problem, steps, initial_positions)
    engine = run_engine_trajectory(config, problem, steps, initial_positions)
    diffs = [float(np.max(np.abs(a - b))) for a, b in zip(engine, ours)]
    return EquivalenceReport(config.variant, config.seed, steps, diffs)
