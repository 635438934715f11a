import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fireflyopt.core import DimensionError, FaParams, ParameterError, RngStream
from fireflyopt.discrete import (
    BinaryMapping,
    IntegerMapping,
    binarize,
    hamming_distance,
    modulus_convert,
    onemax_problem,
    random_keys_decode,
    sigmoid,
)
from fireflyopt.engine import HAMMING, run

# 1 / (1 + exp(-1)) from 40-digit arithmetic, rounded to double
SIGMOID_ONE = 0.7310585786300049


def test_sigmoid_examples():
    assert sigmoid(0.0) == 0.5
    assert sigmoid(50.0) == 1.0
    mpmath.mp.dps = 40
    assert SIGMOID_ONE == float(1 / (1 + mpmath.exp(-1)))
    assert sigmoid(1.0) == pytest.approx(SIGMOID_ONE, rel=1e-15)


@given(st.floats(-700, 700))
def test_sigmoid_symmetry_and_range(x):
    s = sigmoid(x)
    assert 0.0 < s <= 1.0
    assert abs(s + sigmoid(-x) - 1.0) <= np.spacing(1.0)


def test_sigmoid_monotone_array():
    x = np.linspace(-30, 30, 1001)
    assert np.all(np.diff(sigmoid(x)) >= 0)
    assert np.all(np.diff(sigmoid(np.linspace(-5, 5, 101))) > 0)


def test_binarize_saturation_and_sign():
    rng = RngStream(0)
    assert binarize(np.full(1000, 50.0), rng=rng).tolist() == [1] * 1000
    bits = binarize(np.array([-50.0, 50.0]), BinaryMapping(sign=True), RngStream(1))
    assert bits.tolist() == [-1, 1]


def test_binarize_reproducible():
    x = np.linspace(-2, 2, 50)
    assert np.array_equal(binarize(x, rng=RngStream(5)), binarize(x, rng=RngStream(5)))


@pytest.mark.parametrize("x", [-1.5, 0.0, 0.8])
def test_binarize_frequency_tracks_sigmoid(x):
    n = 100_000
    ones = binarize(np.full(n, x), rng=RngStream(17)).mean()
    p = sigmoid(x)
    assert abs(ones - p) <= 3 * np.sqrt(p * (1 - p) / n)


@pytest.mark.parametrize(
    "x, k, m, expected", [(7.3, 2, 5, 4), (0.0, 0, 7, 0), (-2.5, 0, 3, 0), (-0.1, 0, 4, 3)]
)
def test_modulus_examples(x, k, m, expected):
    assert modulus_convert(x, k, m) == expected
    assert IntegerMapping(k, m)(x) == expected


@given(st.floats(-1e9, 1e9), st.integers(-100, 100), st.integers(1, 50))
def test_modulus_range(x, k, m):
    assert 0 <= modulus_convert(x, k, m) < m


def test_modulus_array_matches_scalar():
    x = np.array([-3.7, -0.2, 0.0, 4.9, 12.5])
    assert modulus_convert(x, 1, 4).tolist() == [modulus_convert(v, 1, 4) for v in x]


@pytest.mark.parametrize("m", [0, -3, 2.5])
def test_modulus_rejects_bad_m(m):
    with pytest.raises(ParameterError):
        modulus_convert(1.0, 0, m)


def test_random_keys_examples():
    assert random_keys_decode([0.3, 0.9, 0.7]).tolist() == [0, 2, 1]
    assert random_keys_decode([0.1, 0.2, 0.5, 0.8]).tolist() == [0, 1, 2, 3]
    assert random_keys_decode([0.4] * 5).tolist() == [0, 1, 2, 3, 4]


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=30))
def test_random_keys_valid_permutation(keys):
    perm = random_keys_decode(keys)
    assert sorted(perm.tolist()) == list(range(len(keys)))


def test_hamming_examples():
    assert hamming_distance((0, 1, 1), (0, 1, 1)) == 0
    assert hamming_distance((0, 0, 0), (1, 1, 1)) == 3
    assert hamming_distance((1, 0, 1, 0), (1, 1, 1, 1)) == 2
    with pytest.raises(DimensionError):
        hamming_distance((0, 1), (0, 1, 1))


def test_hamming_agrees_with_engine_metric():
    a, b = (1, 0, 1, 1, 0), (0, 0, 1, 0, 1)
    assert HAMMING(a, b) == hamming_distance(a, b)


def test_onemax_demo_is_deterministic_and_solved():
    p = onemax_problem(12)
    x = np.zeros(12)
    assert p.objective(x) == p.objective(x)
    assert p.objective(np.full(12, 6.0)) == -12.0
    res = run(p, FaParams(alpha0=0.2, theta=0.97, population_size=20, max_generations=100), 0)
    assert res.best_fitness == -12.0
    assert res.history[-1][1] < res.history[0][1]
