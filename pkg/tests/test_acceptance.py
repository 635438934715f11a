"""Acceptance suite. Each test records one PASS/FAIL line, printed in the
terminal summary under "acceptance criteria"."""
import math
import time
from pathlib import Path

import numpy as np

from fireflyopt.benchmarks import make_benchmark
from fireflyopt.core import FaParams, Problem, RngStream
from fireflyopt.diagnostics import cluster_counts, detect_subswarms, influence_radius, mode_coverage
from fireflyopt.discrete import binarize, modulus_convert, random_keys_decode, sigmoid
from fireflyopt.engine import alpha_schedule, attractiveness, estimate_gamma, run
from fireflyopt.experiment import ExperimentConfig, run_experiment
from fireflyopt.reductions import ReductionConfig, verify_reduction
from oracles import himmelblau_minima

SEEDS = range(20)


def test_criterion_1_reduction_equivalence(record_criterion):
    sphere = make_benchmark("sphere", 2)
    setups = {
        "de_like": FaParams(alpha0=0.0, theta=0.97, beta0=0.5, gamma=0.0, population_size=5),
        "sa_like": FaParams(alpha0=0.1, theta=0.97, beta0=0.0, population_size=5),
    }
    ok, slowest, worst = True, 0.0, 0.0
    for variant, params in setups.items():
        start = time.perf_counter()
        for seed in range(5):
            rep = verify_reduction(ReductionConfig(variant, params, seed), sphere, 10)
            ok &= rep.passed and len(rep.max_abs_difference) == 11
            worst = max(worst, max(rep.max_abs_difference))
        slowest = max(slowest, time.perf_counter() - start)
    ok &= slowest < 1.0
    record_criterion(1, ok, f"de_like+sa_like, 5 seeds x 10 gens, max |diff|={worst}, "
                            f"slowest {slowest:.2f}s")
    assert ok


def test_criterion_2_attraction_law(record_criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(2)
    n = 20_000
    beta0 = rng.uniform(0.01, 5.0, n)
    gamma = 10.0 ** rng.uniform(-3, 3, n)
    # keep gamma*r^2 well inside exp's range so both values are representable
    rmax = np.sqrt(50.0 / gamma)
    r1 = rng.uniform(0, 1, n) * rmax
    r2 = rng.uniform(0, 1, n) * rmax
    r1, r2 = np.minimum(r1, r2), np.maximum(r1, r2)
    # the gap must survive rounding: gamma*(r2^2 - r1^2) well above one ulp of 1
    keep = gamma * (r2 ** 2 - r1 ** 2) > 1e-9
    b0, g, r1, r2 = beta0[keep], gamma[keep], r1[keep], r2[keep]
    decreasing = bool(np.all(attractiveness(b0, g, r1) > attractiveness(b0, g, r2)))
    at_zero = bool(np.all(attractiveness(b0, g, 0.0) == b0))
    flat = bool(np.all(attractiveness(b0, 0.0, r2) == b0))
    elapsed = time.perf_counter() - start
    ok = keep.sum() >= 10_000 and decreasing and at_zero and flat and elapsed < 1.0
    record_criterion(2, ok, f"{keep.sum()} triples, strict decrease={decreasing}, "
                            f"beta(0)=beta0 {at_zero}, gamma=0 flat {flat}, {elapsed:.2f}s")
    assert ok


def test_criterion_3_schedule_law(record_criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    exact = decreasing = close_form = True
    for _ in range(1000):
        a0 = float(10.0 ** rng.uniform(-3, 1))
        theta = float(rng.uniform(0.5, 0.999))
        t = int(rng.integers(0, 1001))
        at, at1 = alpha_schedule(a0, theta, t), alpha_schedule(a0, theta, t + 1)
        exact &= at1 == theta * at
        decreasing &= at1 < at
        close_form &= math.isclose(at, a0 * theta ** t, rel_tol=1e-12)
    elapsed = time.perf_counter() - start
    ok = exact and decreasing and close_form and elapsed < 1.0
    record_criterion(3, ok, f"1000 samples, exact ratio={exact}, strictly decreasing={decreasing}, "
                            f"{elapsed:.2f}s")
    assert ok


def test_criterion_4_radius_gamma_consistency(record_criterion):
    start = time.perf_counter()
    gammas = {d: estimate_gamma(Problem((0.0,) * d, (10.0,) * d, lambda x: 0.0))
              for d in range(1, 11)}
    gamma_ok = all(g == 0.01 for g in gammas.values())
    radius_ok = influence_radius(0.01) == 10.0
    rng = np.random.default_rng(4)
    worst_ulps = 0.0
    for _ in range(1000):
        L = float(10.0 ** rng.uniform(-6, 6))
        d = int(rng.integers(1, 8))
        R = influence_radius(estimate_gamma(Problem((0.0,) * d, (L,) * d, lambda x: 0.0)))
        worst_ulps = max(worst_ulps, abs(R - L) / math.ulp(L))
    elapsed = time.perf_counter() - start
    ok = gamma_ok and radius_ok and worst_ulps <= 1.0 and elapsed < 1.0
    record_criterion(4, ok, f"gamma([0,10]^D)=0.01 for D=1..10 {gamma_ok}, R(0.01)=10 {radius_ok}, "
                            f"worst round trip {worst_ulps:g} ulp, {elapsed:.2f}s")
    assert ok


def test_criterion_5_multimodal_discovery(record_criterion):
    start = time.perf_counter()
    p = make_benchmark("himmelblau", 2)
    oracle = np.array(himmelblau_minima())
    modes = np.array(p.known_modes)
    verified = all(np.min(np.linalg.norm(oracle - m, axis=1)) < 1e-9 for m in modes)
    params = FaParams(alpha0=0.5, theta=0.97, population_size=40, max_generations=300)
    fractions = []
    for seed in SEEDS:
        res = run(p, params, seed)
        fractions.append(mode_coverage(res.final_population, p, 0.1).fraction)
    full = sum(f == 1.0 for f in fractions)
    elapsed = time.perf_counter() - start
    ok = verified and full >= 18 and elapsed < 30.0
    record_criterion(5, ok, f"himmelblau n=40, full coverage in {full}/20 seeds (need 18), "
                            f"median fraction {np.median(fractions):g}, {elapsed:.1f}s")
    assert ok


def test_criterion_6_subswarm_subdivision(record_criterion):
    start = time.perf_counter()
    p = make_benchmark("two_wells", 2)
    gstar = estimate_gamma(p)
    radii = np.concatenate([10.0 ** np.linspace(-4, 2, 25), [math.inf]])
    medians, monotone = {}, True
    for label, gamma in (("0", 0.0), ("gamma*", gstar)):
        params = FaParams(alpha0=0.5, theta=0.97, gamma=gamma, population_size=30,
                          max_generations=200)
        counts = []
        for seed in SEEDS:
            final = run(p, params, seed).final_population
            counts.append(detect_subswarms(final, radius=influence_radius(gamma)).count)
            sweep = cluster_counts(final, radii)
            monotone &= all(a >= b for a, b in zip(sweep, sweep[1:]))
        medians[label] = float(np.median(counts))
    elapsed = time.perf_counter() - start
    ok = medians["0"] == 1 and medians["gamma*"] >= 2 and monotone and elapsed < 30.0
    record_criterion(6, ok, f"two_wells median clusters: gamma=0 -> {medians['0']:g} (need 1), "
                            f"gamma*={gstar:g} -> {medians['gamma*']:g} (need >=2), "
                            f"monotone in R {monotone}, {elapsed:.1f}s")
    assert ok


def test_criterion_7_convergence(record_criterion, tmp_path):
    start = time.perf_counter()
    cfg = ExperimentConfig(benchmark="sphere", dimension=2, alpha0=0.5, theta=0.97,
                           population_size=25, max_generations=200, seeds=list(SEEDS),
                           output_dir=str(tmp_path))
    result = run_experiment(cfg)
    median = result.summary["best_fitness"]["median"]
    monotone = True
    for f in sorted(Path(tmp_path, "runs").glob("seed_*/convergence.csv")):
        best = np.loadtxt(f, delimiter=",", comments="#", skiprows=4, usecols=1)
        monotone &= len(best) == 201 and bool(np.all(np.diff(best) <= 0))
    elapsed = time.perf_counter() - start
    ok = median < 1e-3 and monotone and not result.failed and elapsed < 10.0
    record_criterion(7, ok, f"sphere median best {median:.3g} (need <1e-3), "
                            f"best column non-increasing {monotone}, {elapsed:.1f}s")
    assert ok


def test_criterion_8_discretization(record_criterion):
    start = time.perf_counter()
    half = sigmoid(0.0) == 0.5
    ones = float(binarize(np.zeros(100_000), rng=RngStream(8)).mean())
    rng = np.random.default_rng(8)
    x = rng.uniform(-1e6, 1e6, 10_000)
    k = rng.integers(-50, 51, 10_000)
    m = rng.integers(1, 101, 10_000)
    vals = np.array([modulus_convert(float(a), int(b), int(c)) for a, b, c in zip(x, k, m)])
    in_range = bool(np.all((vals >= 0) & (vals < m)))
    perms = affine = True
    for _ in range(1000):
        keys = rng.uniform(0, 1, int(rng.integers(1, 40)))
        perm = random_keys_decode(keys)
        perms &= sorted(perm.tolist()) == list(range(len(keys)))
        a, b = float(rng.uniform(0.1, 10)), float(rng.uniform(-10, 10))
        affine &= np.array_equal(perm, random_keys_decode(a * keys + b))
    elapsed = time.perf_counter() - start
    ok = half and abs(ones - 0.5) <= 0.005 and in_range and perms and affine and elapsed < 2.0
    record_criterion(8, ok, f"sigmoid(0)=0.5 {half}, ones fraction {ones:.4f}, modulus in range "
                            f"{in_range}, permutations {perms}, affine invariant {affine}, "
                            f"{elapsed:.2f}s")
    assert ok


def test_criterion_9_determinism(record_criterion, tmp_path):
    start = time.perf_counter()

    def artifacts(out):
        cfg = ExperimentConfig(benchmark="himmelblau", dimension=2, population_size=20,
                               max_generations=60, seeds=[0, 1, 2], snapshot_every=20,
                               mode_coverage=True, output_dir=str(out))
        run_experiment(cfg)
        root = Path(out, "runs")
        return {p.relative_to(root): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}

    first, second = artifacts(tmp_path / "a"), artifacts(tmp_path / "b")
    elapsed = time.perf_counter() - start
    ok = len(first) == 9 and first == second and elapsed < 10.0
    record_criterion(9, ok, f"{len(first)} per-run files byte-identical {first == second}, "
                            f"{elapsed:.1f}s")
    assert ok
