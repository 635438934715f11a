"""Operators mapping continuous firefly positions to discrete encodings."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DimensionError, ParameterError, Problem, RngStream

__all__ = [
    "BinaryMapping",
    "IntegerMapping",
    "sigmoid",
    "binarize",
    "modulus_convert",
    "random_keys_decode",
    "hamming_distance",
    "onemax_problem",
]


def sigmoid(x):
    """Logistic function ``1 / (1 + exp(-x))``, evaluated without overflow."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class BinaryMapping:
    """Random-threshold sigmoid binarization.

    With ``sign=True`` bits are mapped through ``u = 2 * S - 1`` to -1/+1.
    """

    sign: bool = False


def binarize(x, mapping: BinaryMapping = BinaryMapping(), rng: RngStream = None) -> np.ndarray:
    """Per component: 1 if ``sigmoid(x_d) > r_d`` for a fresh uniform ``r_d``.

    Draws exactly one uniform per component, in component order.
    """
    if rng is None:
        raise ParameterError("binarize needs an RngStream")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    r = rng.uniform(x.shape)
    bits = (sigmoid(x) > r).astype(int)
    if mapping.sign:
        return 2 * bits - 1
    return bits


@dataclass(frozen=True)
class IntegerMapping:
    k: int = 0
    m: int = 2

    def __post_init__(self):
        if int(self.m) != self.m or self.m <= 0:
            raise ParameterError(f"modulus must be a positive integer, got {self.m}")
        if int(self.k) != self.k:
            raise ParameterError(f"offset must be an integer, got {self.k}")

    def __call__(self, x):
        return modulus_convert(x, self.k, self.m)


def modulus_convert(x, k: int, m: int):
    """``floor(x + k) mod m`` with the result always in ``0 .. m-1``.

    Scalars give a Python ``int``; arrays give an integer array.
    """
    if int(m) != m or m <= 0:
        raise ParameterError(f"modulus must be a positive integer, got {m}")
    if np.ndim(x) == 0:
        return math.floor(float(x) + k) % int(m)
    return np.mod(np.floor(np.asarray(x, dtype=float) + k), m).astype(np.int64)


def random_keys_decode(x) -> np.ndarray:
    """Rank of each key in ascending order; equal keys rank by index."""
    x = np.asarray(x, dtype=float).ravel()
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.size, dtype=np.int64)
    ranks[order] = np.arange(x.size)
    return ranks


def hamming_distance(a, b) -> int:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape} vs {b.shape}")
    return int(np.count_nonzero(a != b))


class _OneMax:
    def __init__(self, decode_seed):
        self.decode_seed = decode_seed

    def __call__(self, x):
        # fixed threshold stream keeps the objective deterministic
        bits = binarize(x, BinaryMapping(), RngStream(self.decode_seed))
        return -float(bits.sum())


def onemax_problem(dim: int, decode_seed: int = 0, bound: float = 6.0) -> Problem:
    """Binary OneMax over sigmoid-decoded positions in ``[-bound, bound]^dim``.

    Fitness is minus the number of ones, so the optimum is ``-dim``.
    """
    return Problem(
        (-bound,) * dim,
        (bound,) * dim,
        _OneMax(decode_seed),
        name="onemax",
        optimum=-float(dim),
    )
