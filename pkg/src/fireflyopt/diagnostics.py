"""Measurements of swarm structure: influence radius, subswarms, mode coverage."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import ParameterError, Problem
from .engine import EUCLIDEAN, DistanceMetric, Population

__all__ = [
    "GLOBAL_VISIBILITY",
    "DiagnosticUnavailableError",
    "SubswarmReport",
    "ModeCoverage",
    "influence_radius",
    "detect_subswarms",
    "cluster_counts",
    "mode_coverage",
    "default_capture_tolerance",
]

#: Radius reported for gamma == 0: every firefly sees every other one.
GLOBAL_VISIBILITY = math.inf


class DiagnosticUnavailableError(LookupError):
    pass


def influence_radius(gamma: float) -> float:
    """``1 / sqrt(gamma)``, or :data:`GLOBAL_VISIBILITY` when ``gamma == 0``.

    Computed as ``sqrt(1 / gamma)``, which rounds closer to the true inverse
    of ``1 / L**2`` than dividing by the root.
    """
    if not gamma >= 0 or math.isnan(gamma):
        raise ParameterError(f"gamma must be nonnegative, got {gamma}")
    if gamma == 0:
        return GLOBAL_VISIBILITY
    return math.sqrt(1.0 / gamma)


@dataclass
class SubswarmReport:
    radius: float
    labels: np.ndarray
    count: int
    centroids: np.ndarray
    best_fitness: np.ndarray
    sizes: np.ndarray

    def as_dict(self) -> dict:
        return {
            "radius": None if math.isinf(self.radius) else self.radius,
            "global_visibility": math.isinf(self.radius),
            "count": self.count,
            "labels": self.labels.tolist(),
            "sizes": self.sizes.tolist(),
            "centroids": self.centroids.tolist(),
            "best_fitness": self.best_fitness.tolist(),
        }


def _positions_fitness(pop):
    if isinstance(pop, Population):
        return pop.positions, pop.fitness
    x = np.array(pop, dtype=float, ndmin=2)
    return x, np.full(x.shape[0], np.nan)


def _single_linkage(x: np.ndarray, metric: DistanceMetric, radius: float) -> np.ndarray:
    n = x.shape[0]
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    if math.isinf(radius):
        return np.zeros(n, dtype=int)
    for j in range(1, n):
        d = metric.batch(x[:j], x[j])
        for i in np.flatnonzero(d <= radius):
            ri, rj = find(int(i)), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    roots = [find(i) for i in range(n)]
    # number clusters in order of their lowest member index
    relabel = {}
    for r in roots:
        relabel.setdefault(r, len(relabel))
    return np.array([relabel[r] for r in roots], dtype=int)


def detect_subswarms(
    pop, metric: DistanceMetric = EUCLIDEAN, radius: float = GLOBAL_VISIBILITY
) -> SubswarmReport:
    """Single-linkage clusters: chains of pairwise distances ``<= radius``.

    ``pop`` may be a :class:`Population` or a bare ``(n, d)`` array (then
    per-cluster best fitness is NaN).
    """
    if not radius > 0:
        raise ParameterError("radius must be positive")
    x, f = _positions_fitness(pop)
    labels = _single_linkage(x, metric, radius)
    count = int(labels.max()) + 1 if labels.size else 0
    centroids = np.array([x[labels == c].mean(axis=0) for c in range(count)])
    best = np.array([np.min(f[labels == c]) for c in range(count)])
    sizes = np.bincount(labels, minlength=count)
    return SubswarmReport(float(radius), labels, count, centroids, best, sizes)


def cluster_counts(pop, radii: Sequence[float], metric: DistanceMetric = EUCLIDEAN):
    """Cluster count at each radius in ``radii``."""
    return [detect_subswarms(pop, metric, r).count for r in radii]


@dataclass
class ModeCoverage:
    modes: np.ndarray
    tolerance: float
    captured: np.ndarray
    nearest_distance: np.ndarray

    @property
    def fraction(self) -> float:
        return float(np.count_nonzero(self.captured)) / len(self.captured)

    def as_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "fraction": self.fraction,
            "captured": self.captured.tolist(),
            "nearest_distance": self.nearest_distance.tolist(),
            "modes": self.modes.tolist(),
        }


def default_capture_tolerance(problem: Problem) -> float:
    return 0.01 * float(np.mean(problem.widths))


def mode_coverage(
    pop,
    problem: Problem,
    tol: Optional[float] = None,
    metric: DistanceMetric = EUCLIDEAN,
) -> ModeCoverage:
    """Which known modes have at least one firefly within ``tol``."""
    if not problem.known_modes:
        raise DiagnosticUnavailableError(
            f"problem {problem.name!r} has no known modes"
        )
    if tol is None:
        tol = default_capture_tolerance(problem)
    if not tol > 0:
        raise ParameterError("capture tolerance must be positive")
    x, _ = _positions_fitness(pop)
    modes = np.array(problem.known_modes)
    nearest = np.array([float(np.min(metric.batch(x, m))) for m in modes])
    return ModeCoverage(modes, float(tol), nearest <= tol, nearest)
