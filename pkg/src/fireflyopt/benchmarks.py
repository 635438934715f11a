"""Test objectives with known optima.

Names are stable identifiers used on the command line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .core import ConfigurationError, Problem

__all__ = ["BenchmarkSpec", "make_benchmark", "benchmark_spec", "BENCHMARK_NAMES"]


class Sphere:
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return float(np.sum(x * x))


class Rastrigin:
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


class Ackley:
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        d = x.size
        a = -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x * x) / d))
        b = -np.exp(np.sum(np.cos(2.0 * np.pi * x)) / d)
        return float(a + b + 20.0 + np.e)


class Himmelblau:
    def __call__(self, x):
        u, v = float(x[0]), float(x[1])
        return (u * u + v - 11.0) ** 2 + (u + v * v - 7.0) ** 2


# Minima located by damped Newton iteration (40-digit arithmetic) from
# coarse starting points; see tests/test_benchmarks.py for the live check.
HIMMELBLAU_MODES = (
    (3.0, 2.0),
    (-2.8051180869527448531, 3.1313125182505729658),
    (-3.7793102533777468919, -3.2831859912861694123),
    (3.5844283403304917449, -1.8481265269644035535),
)


class TwoWells:
    """Two equal inverted Gaussians of common width ``sigma``."""

    def __init__(self, centers, sigma):
        self.centers = np.asarray(centers, dtype=float)
        self.sigma = float(sigma)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        d2 = np.sum((self.centers - x) ** 2, axis=1)
        return float(-np.sum(np.exp(-d2 / (2.0 * self.sigma**2))))


# Anisotropic box: mean width 12, so the estimated influence radius (12) is
# shorter than the 14-unit well separation.
TWO_WELLS_LOWER = (0.0, 0.0)
TWO_WELLS_UPPER = (20.0, 4.0)
TWO_WELLS_CENTERS = ((3.0, 2.0), (17.0, 2.0))
TWO_WELLS_SIGMA = 1.5


@dataclass(frozen=True)
class BenchmarkSpec:
    name: str
    dimension: int
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    optimum: float
    modes: Tuple[Tuple[float, ...], ...]
    objective: Callable
    description: str = ""


def _cube(dim, lo, hi):
    return (lo,) * dim, (hi,) * dim


def benchmark_spec(name: str, dim: int = 2) -> BenchmarkSpec:
    if int(dim) != dim or dim < 1:
        raise ConfigurationError(f"dimension must be a positive integer, got {dim}")
    dim = int(dim)
    if name == "sphere":
        lo, hi = _cube(dim, -5.0, 5.0)
        return BenchmarkSpec(name, dim, lo, hi, 0.0, ((0.0,) * dim,), Sphere(),
                             "sum of squares, unimodal")
    if name == "rastrigin":
        lo, hi = _cube(dim, -5.12, 5.12)
        return BenchmarkSpec(name, dim, lo, hi, 0.0, ((0.0,) * dim,), Rastrigin(),
                             "highly multimodal, global minimum at the origin")
    if name == "ackley":
        lo, hi = _cube(dim, -32.768, 32.768)
        return BenchmarkSpec(name, dim, lo, hi, 0.0, ((0.0,) * dim,), Ackley(),
                             "multimodal with a deep central funnel")
    if name == "himmelblau":
        if dim != 2:
            raise ConfigurationError("himmelblau is defined for dim=2 only")
        lo, hi = _cube(2, -5.0, 5.0)
        return BenchmarkSpec(name, 2, lo, hi, 0.0, HIMMELBLAU_MODES, Himmelblau(),
                             "four global minima with f=0")
    if name == "two_wells":
        if dim != 2:
            raise ConfigurationError("two_wells is defined for dim=2 only")
        return BenchmarkSpec(name, 2, TWO_WELLS_LOWER, TWO_WELLS_UPPER, -1.0,
                             TWO_WELLS_CENTERS,
                             TwoWells(TWO_WELLS_CENTERS, TWO_WELLS_SIGMA),
                             "two equal Gaussian wells 14 apart, width 1.5")
    raise ConfigurationError(
        f"unknown benchmark {name!r}; choose from {', '.join(BENCHMARK_NAMES)}"
    )


BENCHMARK_NAMES = ("sphere", "rastrigin", "ackley", "himmelblau", "two_wells")


def make_benchmark(name: str, dim: int = 2, check: bool = True) -> Problem:
    """Build a :class:`Problem` for a named benchmark.

    With ``check`` (the default) every listed mode is evaluated and must
    reproduce the stated optimum to within 1e-6.
    """
    spec = benchmark_spec(name, dim)
    if check:
        for mode in spec.modes:
            value = spec.objective(np.asarray(mode))
            if abs(value - spec.optimum) > 1e-6:
                raise ConfigurationError(
                    f"{name}: mode {mode} gives {value}, expected {spec.optimum}"
                )
    return Problem(
        spec.lower,
        spec.upper,
        spec.objective,
        known_modes=spec.modes,
        name=spec.name,
        optimum=spec.optimum,
    )
