"""Domain types shared by every part of the package.

Everything here is minimization-only: a firefly is "brighter" than another
when its objective value is strictly lower.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "ParameterError",
    "ConfigurationError",
    "DimensionError",
    "NonFiniteObjectiveError",
    "BudgetExhausted",
    "ParameterWindowWarning",
    "Problem",
    "FaParams",
    "Firefly",
    "RngStream",
    "Evaluator",
    "clamp_to_bounds",
    "evaluate",
    "BOUNDARY_HANDLING",
]

# Recorded into every RunResult so alternative rules can be compared later.
BOUNDARY_HANDLING = "clamp"

GAMMA_WINDOW = (1e-3, 1e3)
THETA_WINDOW = (0.9, 0.99)


class ParameterError(ValueError):
    """An algorithm constant is outside its admissible range."""


class ConfigurationError(ValueError):
    """A benchmark, reduction or experiment was configured inconsistently."""


class DimensionError(ValueError):
    """Vectors of incompatible length were combined."""


class NonFiniteObjectiveError(RuntimeError):
    def __init__(self, position, value):
        self.position = np.array(position, dtype=float)
        self.value = value
        super().__init__(
            f"objective returned non-finite value {value!r} at position "
            f"{self.position.tolist()}"
        )


class BudgetExhausted(RuntimeError):
    """Raised by :class:`Evaluator` when the evaluation budget is spent."""


class ParameterWindowWarning(UserWarning):
    """A parameter lies outside its customary practical range."""


@dataclass(frozen=True, eq=False)
class Problem:
    """A box-bounded minimization problem.

    Parameters
    ----------
    lower_bounds, upper_bounds : array_like
        Per-dimension search limits; ``lower < upper`` componentwise.
    objective : callable
        Deterministic map from a position vector to a real fitness.
    known_modes : sequence of array_like, optional
        Locations of known optima, used only by the diagnostics.
    name : str
        Identifier echoed into run records.
    """

    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    objective: Callable[[np.ndarray], float]
    known_modes: Optional[tuple] = None
    name: str = "custom"
    optimum: Optional[float] = None

    def __post_init__(self):
        lo = np.array(self.lower_bounds, dtype=float).ravel()
        hi = np.array(self.upper_bounds, dtype=float).ravel()
        if lo.size == 0:
            raise ConfigurationError("problem must have at least one dimension")
        if lo.shape != hi.shape:
            raise DimensionError(
                f"lower bounds have {lo.size} entries, upper bounds {hi.size}"
            )
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ConfigurationError("bounds must be finite")
        if np.any(lo >= hi):
            raise ConfigurationError("every lower bound must be below its upper bound")
        if not callable(self.objective):
            raise ConfigurationError("objective is not callable")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower_bounds", lo)
        object.__setattr__(self, "upper_bounds", hi)
        if self.known_modes is not None:
            modes = []
            for m in self.known_modes:
                m = np.array(m, dtype=float).ravel()
                if m.size != lo.size:
                    raise DimensionError("known mode has wrong dimension")
                m.flags.writeable = False
                modes.append(m)
            object.__setattr__(self, "known_modes", tuple(modes))

    @property
    def dimension(self) -> int:
        return self.lower_bounds.size

    @property
    def widths(self) -> np.ndarray:
        return self.upper_bounds - self.lower_bounds

    @classmethod
    def maximize(cls, objective, lower_bounds, upper_bounds, **kwargs) -> "Problem":
        """Wrap a maximization objective by negation."""

        def negated(x):
            return -objective(x)

        return cls(lower_bounds, upper_bounds, negated, **kwargs)


@dataclass(frozen=True)
class FaParams:
    """Constants of the firefly algorithm.

    ``gamma=None`` means "estimate from the problem's domain" and is filled
    in by :meth:`resolve` before a run starts.
    """

    alpha0: float = 0.5
    theta: float = 0.97
    beta0: float = 1.0
    gamma: Optional[float] = None
    population_size: int = 25
    max_generations: int = 100

    def __post_init__(self):
        if not (0.0 < self.theta < 1.0):
            raise ParameterError(f"theta must lie in (0, 1), got {self.theta}")
        if not (math.isfinite(self.alpha0) and self.alpha0 >= 0):
            raise ParameterError(f"alpha0 must be >= 0, got {self.alpha0}")
        # beta0 = 0 is admitted: it is the inducing setting of the SA-like reduction.
        if not (math.isfinite(self.beta0) and self.beta0 >= 0):
            raise ParameterError(f"beta0 must be >= 0, got {self.beta0}")
        if self.gamma is not None and not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise ParameterError(f"gamma must be >= 0, got {self.gamma}")
        if int(self.population_size) != self.population_size or self.population_size < 1:
            raise ParameterError("population_size must be a positive integer")
        if int(self.max_generations) != self.max_generations or self.max_generations < 0:
            raise ParameterError("max_generations must be a nonnegative integer")
        if not (THETA_WINDOW[0] <= self.theta <= THETA_WINDOW[1]):
            warnings.warn(
                f"theta={self.theta} outside the usual range {THETA_WINDOW}",
                ParameterWindowWarning,
                stacklevel=3,
            )
        if self.gamma and not (GAMMA_WINDOW[0] <= self.gamma <= GAMMA_WINDOW[1]):
            warnings.warn(
                f"gamma={self.gamma} outside the usual range {GAMMA_WINDOW}",
                ParameterWindowWarning,
                stacklevel=3,
            )

    def resolve(self, problem: Problem) -> "FaParams":
        if self.gamma is not None:
            return self
        from .engine import estimate_gamma

        return replace(self, gamma=estimate_gamma(problem))

    def as_dict(self) -> dict:
        return {
            "alpha0": self.alpha0,
            "theta": self.theta,
            "beta0": self.beta0,
            "gamma": self.gamma,
            "population_size": int(self.population_size),
            "max_generations": int(self.max_generations),
        }


@dataclass
class Firefly:
    position: np.ndarray
    brightness: float


class RngStream:
    """Seeded source of uniform and standard-normal draws.

    Consecutive calls consume the underlying PCG64 stream in order, so a
    block draw of shape ``(k, d)`` equals ``k`` successive draws of length
    ``d``. The engine relies on this to batch its per-move draws.
    """

    def __init__(self, seed: int):
        seed = int(seed)
        if not (0 <= seed < 2**64):
            raise ParameterError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def normal(self, size=None) -> np.ndarray:
        return self._gen.standard_normal(size)

    def uniform(self, size=None) -> np.ndarray:
        return self._gen.random(size)

    def uniform_in(self, lower, upper, size) -> np.ndarray:
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        return lower + (upper - lower) * self._gen.random(size)

    def __repr__(self):
        return f"RngStream(seed={self.seed})"


def _check_dim(position: np.ndarray, problem: Problem) -> None:
    if position.shape[-1] != problem.dimension:
        raise DimensionError(
            f"position has {position.shape[-1]} components, problem has "
            f"{problem.dimension}"
        )


def clamp_to_bounds(position, problem: Problem) -> np.ndarray:
    """Project ``position`` (or a stack of positions) onto the box."""
    x = np.asarray(position, dtype=float)
    _check_dim(x, problem)
    return np.minimum(problem.upper_bounds, np.maximum(problem.lower_bounds, x))


class Evaluator:
    """Counts objective calls and enforces an optional budget."""

    def __init__(self, problem: Problem, budget: Optional[int] = None):
        self.problem = problem
        self.budget = budget
        self.count = 0

    @property
    def remaining(self) -> Optional[int]:
        if self.budget is None:
            return None
        return self.budget - self.count

    def __call__(self, position) -> float:
        if self.budget is not None and self.count >= self.budget:
            raise BudgetExhausted(f"evaluation budget of {self.budget} spent")
        x = np.array(position, dtype=float)
        _check_dim(x, self.problem)
        x.flags.writeable = False
        value = float(self.problem.objective(x))
        self.count += 1
        if not math.isfinite(value):
            raise NonFiniteObjectiveError(x, value)
        return value


def evaluate(problem: Problem, position, evaluator: Optional[Evaluator] = None) -> float:
    """Objective value at ``position``; counted when an evaluator is given."""
    if evaluator is None:
        evaluator = Evaluator(problem)
    elif evaluator.problem is not problem:
        raise ConfigurationError("evaluator belongs to a different problem")
    return evaluator(position)


def as_vector(x: Sequence[float]) -> np.ndarray:
    return np.asarray(x, dtype=float)
