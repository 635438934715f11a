"""Seeded batch experiments, parameter sweeps and plot-ready series.

Layout of an experiment directory::

    config.json                  resolved configuration
    summary.json                 cross-seed statistics
    timing.json                  wall-clock times (not reproducible by nature)
    runs/seed_<s>/convergence.csv
    runs/seed_<s>/summary.json
    runs/seed_<s>/snapshots.jsonl    only when snapshot_every is set

Every per-run file carries the resolved configuration and its seed, so a
run can be reproduced from any one of its files.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .benchmarks import make_benchmark
from .core import ConfigurationError, FaParams
from .diagnostics import detect_subswarms, influence_radius, mode_coverage
from .engine import HISTORY_COLUMNS, Termination, estimate_gamma, run

__all__ = [
    "MissingDataError",
    "ExperimentConfig",
    "run_experiment",
    "run_sweep",
    "emit_plot_data",
    "parse_seeds",
    "PLOT_KINDS",
]

log = logging.getLogger(__name__)

PLOT_KINDS = ("convergence", "swarm_scatter", "gamma_sweep")


class MissingDataError(LookupError):
    """Requested series cannot be built from the artifacts on disk."""


def parse_seeds(text) -> List[int]:
    """``"0,3,5"``, ``"0-19"`` or a list of ints."""
    if isinstance(text, (list, tuple)):
        return [int(s) for s in text]
    seeds = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"(\d+)-(\d+)", part)
        if m:
            seeds.extend(range(int(m.group(1)), int(m.group(2)) + 1))
        else:
            seeds.append(int(part))
    return seeds


@dataclass
class ExperimentConfig:
    benchmark: str = "sphere"
    dimension: int = 2
    alpha0: float = 0.5
    theta: float = 0.97
    beta0: float = 1.0
    gamma: Optional[float] = None
    population_size: int = 25
    max_generations: int = 200
    seeds: List[int] = field(default_factory=lambda: [0])
    target_fitness: Optional[float] = None
    max_evaluations: Optional[int] = None
    snapshot_every: Optional[int] = None
    mode_coverage: bool = False
    coverage_tol: Optional[float] = None
    output_dir: str = "fireflyopt-out"
    workers: int = 1

    # keys that do not influence results and stay out of artifact headers
    _LOCAL_KEYS = ("output_dir", "workers")

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        if "n_seeds" in data:
            n = int(data.pop("n_seeds"))
            data.setdefault("seeds", list(range(n)))
        if "seeds" in data:
            data["seeds"] = parse_seeds(data["seeds"])
        if data.get("gamma") == "auto":
            data["gamma"] = None
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {unknown}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path, overrides: Optional[dict] = None) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: not valid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise ConfigurationError(f"{path}: expected a key-value object")
        data.update(overrides or {})
        return cls.from_mapping(data)

    def fa_params(self) -> FaParams:
        return FaParams(
            alpha0=self.alpha0,
            theta=self.theta,
            beta0=self.beta0,
            gamma=self.gamma,
            population_size=self.population_size,
            max_generations=self.max_generations,
        )

    def termination(self) -> Termination:
        return Termination(self.max_generations, self.target_fitness, self.max_evaluations)

    def problem(self):
        return make_benchmark(self.benchmark, self.dimension)

    def validate(self) -> None:
        self.problem()
        self.fa_params()
        if not self.seeds:
            raise ConfigurationError("at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigurationError("seeds must be distinct")
        if any(s < 0 for s in self.seeds):
            raise ConfigurationError("seeds must be nonnegative")
        if self.max_evaluations is not None and self.max_evaluations < self.population_size:
            raise ConfigurationError("max_evaluations is below the population size")
        if self.snapshot_every is not None and self.snapshot_every < 1:
            raise ConfigurationError("snapshot_every must be positive")
        if self.workers < 1:
            raise ConfigurationError("workers must be positive")
        if self.mode_coverage and not self.problem().known_modes:
            raise ConfigurationError(f"{self.benchmark} has no known modes")

    def resolved(self) -> "ExperimentConfig":
        if self.gamma is not None:
            return self
        return replace(self, gamma=estimate_gamma(self.problem()))

    def record(self) -> dict:
        """Resolved configuration as embedded in artifacts."""
        d = asdict(self.resolved())
        for k in self._LOCAL_KEYS:
            d.pop(k)
        d["gamma_estimated"] = self.gamma is None
        return d


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, allow_nan=True)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _write_convergence(path: Path, record: dict, seed: int, history: np.ndarray):
    lines = [
        "# fireflyopt convergence history",
        f"# config: {_dumps(record)}",
        f"# seed: {seed}",
        ",".join(HISTORY_COLUMNS),
    ]
    for row in history:
        g, best, mean, worst, alpha, evals = row
        lines.append(",".join([
            _fmt(int(g)), _fmt(best), _fmt(mean), _fmt(worst), _fmt(alpha), _fmt(int(evals)),
        ]))
    path.write_text("\n".join(lines) + "\n")


def _execute_seed(record: dict, config: ExperimentConfig, seed: int, run_dir: str) -> dict:
    """Run one seed and write its artifacts. Safe to call in a worker process."""
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    problem = config.problem()
    params = config.fa_params()
    try:
        result = run(
            problem, params, seed, config.termination(),
            snapshot_every=config.snapshot_every,
        )
    except Exception as exc:  # recorded; the remaining seeds go on
        summary = {
            "record": "run_summary",
            "config": record,
            "seed": seed,
            "status": "failed",
            "error": type(exc).__name__,
            "message": str(exc),
        }
        (run_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
        return {"summary": summary, "wall_time": time.perf_counter() - start}

    gamma = result.params["gamma"]
    radius = influence_radius(gamma)
    final = detect_subswarms(result.final_population, radius=radius)
    summary = {
        "record": "run_summary",
        "config": record,
        "seed": seed,
        "status": "ok",
        "best_position": result.best_position.tolist(),
        "best_fitness": result.best_fitness,
        "evaluations": result.evaluations,
        "generations": int(result.final_population.generation),
        "termination": result.termination_reason,
        "resolved_params": result.params,
        "boundary_handling": result.boundary_handling,
        "final_subswarms": {
            "radius": None if math.isinf(radius) else radius,
            "count": final.count,
            "sizes": final.sizes.tolist(),
        },
    }
    if config.mode_coverage:
        cov = mode_coverage(result.final_population, problem, config.coverage_tol)
        summary["mode_coverage"] = cov.as_dict()

    _write_convergence(run_dir / "convergence.csv", record, seed, result.history)
    if config.snapshot_every:
        lines = [_dumps({"record": "snapshot_header", "config": record, "seed": seed})]
        for snap in result.snapshots:
            rep = detect_subswarms(snap, radius=radius)
            lines.append(_dumps({
                "record": "subswarm_snapshot",
                "generation": snap.generation,
                "radius": None if math.isinf(radius) else radius,
                "count": rep.count,
                "labels": rep.labels.tolist(),
                "positions": snap.positions.tolist(),
                "fitness": snap.fitness.tolist(),
            }))
        (run_dir / "snapshots.jsonl").write_text("\n".join(lines) + "\n")
    (run_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return {"summary": summary, "wall_time": time.perf_counter() - start}


def _check_writable(out: Path) -> None:
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigurationError(f"output directory {out} is not writable: {exc}") from exc


@dataclass
class ExperimentResult:
    output_dir: Path
    summary: dict
    runs: List[dict]

    @property
    def failed(self) -> List[int]:
        return [r["seed"] for r in self.runs if r["status"] != "ok"]


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Execute every seed of ``config`` and write all artifacts."""
    config.validate()
    out = Path(config.output_dir)
    _check_writable(out)
    record = config.record()
    (out / "config.json").write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")

    jobs = [(s, str(out / "runs" / f"seed_{s}")) for s in config.seeds]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_execute_seed, record, config, s, d) for s, d in jobs]
            outcomes = [f.result() for f in futures]
    else:
        outcomes = [_execute_seed(record, config, s, d) for s, d in jobs]

    runs = [o["summary"] for o in outcomes]
    for r in runs:
        if r["status"] != "ok":
            log.warning("seed %s failed: %s", r["seed"], r["message"])
    ok = [r for r in runs if r["status"] == "ok"]
    summary = {
        "record": "experiment_summary",
        "config": record,
        "seeds": list(config.seeds),
        "failed_seeds": [r["seed"] for r in runs if r["status"] != "ok"],
    }
    if ok:
        best = np.array([r["best_fitness"] for r in ok])
        counts = np.array([r["final_subswarms"]["count"] for r in ok])
        summary["best_fitness"] = {
            "min": float(best.min()),
            "median": float(np.median(best)),
            "max": float(best.max()),
        }
        summary["final_cluster_count_median"] = float(np.median(counts))
        if config.mode_coverage:
            full = [r["mode_coverage"]["fraction"] == 1.0 for r in ok]
            summary["mode_coverage_success_rate"] = sum(full) / len(full)
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    timing = {
        "wall_time_seconds": {str(s): o["wall_time"] for (s, _), o in zip(jobs, outcomes)},
    }
    (out / "timing.json").write_text(json.dumps(timing, indent=2, sort_keys=True) + "\n")
    return ExperimentResult(out, summary, runs)


_AUTO = re.compile(r"^\s*(?:([0-9.eE+-]+)\s*\*\s*)?auto\s*$")


def _sweep_value(name: str, raw, config: ExperimentConfig):
    """Parse one sweep value; gamma also accepts ``auto`` and ``<k>*auto``."""
    if not isinstance(raw, str):
        return raw
    if name == "gamma":
        m = _AUTO.match(raw)
        if m:
            k = float(m.group(1)) if m.group(1) else 1.0
            return k * estimate_gamma(config.problem())
    if name in ("population_size", "max_generations", "dimension", "snapshot_every"):
        return int(raw)
    if name == "benchmark":
        return raw
    return float(raw)


def run_sweep(base: ExperimentConfig, grid: Dict[str, Sequence]) -> dict:
    """Cross product of ``grid`` values, one experiment per point.

    Points are written to ``<output_dir>/point_<k>`` and indexed in
    ``<output_dir>/sweep.json``.
    """
    if not grid:
        raise ConfigurationError("sweep needs at least one parameter")
    allowed = {f.name for f in fields(ExperimentConfig)} - {"seeds", "output_dir", "workers"}
    for name in grid:
        if name not in allowed:
            raise ConfigurationError(f"cannot sweep over {name!r}")
    base.validate()
    out = Path(base.output_dir)
    _check_writable(out)
    names = list(grid)
    values = [[_sweep_value(n, v, base) for v in grid[n]] for n in names]
    points = []
    for k, combo in enumerate(itertools.product(*values)):
        cfg = replace(base, output_dir=str(out / f"point_{k:03d}"), **dict(zip(names, combo)))
        res = run_experiment(cfg)
        points.append({
            "index": k,
            "dir": f"point_{k:03d}",
            "values": dict(zip(names, combo)),
            "resolved_gamma": res.summary["config"]["gamma"],
            "final_cluster_count_median": res.summary.get("final_cluster_count_median"),
            "failed_seeds": res.summary["failed_seeds"],
        })
    index = {
        "record": "sweep",
        "base_config": base.record(),
        "parameters": names,
        "points": points,
    }
    (out / "sweep.json").write_text(json.dumps(index, indent=2, sort_keys=True) + "\n")
    return index


def _run_dirs(artifacts: Path):
    runs = artifacts / "runs"
    if not runs.is_dir():
        return []
    dirs = [d for d in runs.iterdir() if d.is_dir() and d.name.startswith("seed_")]
    return sorted(dirs, key=lambda d: int(d.name.split("_")[1]))


def _header(kind: str, record: dict, seed=None) -> List[str]:
    lines = [f"# fireflyopt {kind} series", f"# config: {_dumps(record)}"]
    if seed is not None:
        lines.append(f"# seed: {seed}")
    return lines


def _read_convergence(path: Path):
    meta = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# config: "):
                meta["config"] = json.loads(line[len("# config: "):])
            elif line.startswith("# seed: "):
                meta["seed"] = int(line[len("# seed: "):])
            elif line.startswith("#") or line.startswith("generation"):
                continue
            elif line:
                rows.append([float(v) for v in line.split(",")])
    return meta, np.array(rows)


def emit_plot_data(artifacts, kind: str, out_dir=None) -> List[Path]:
    """Write whitespace-delimited series files for ``kind``.

    ``convergence`` and ``swarm_scatter`` read an experiment directory;
    ``gamma_sweep`` reads a sweep directory. Returns the written paths.
    """
    if kind not in PLOT_KINDS:
        raise ConfigurationError(f"unknown plot kind {kind!r}; choose from {PLOT_KINDS}")
    artifacts = Path(artifacts)
    out = Path(out_dir) if out_dir is not None else artifacts / "plot"
    written = []

    if kind == "convergence":
        files = [d / "convergence.csv" for d in _run_dirs(artifacts)]
        files = [f for f in files if f.exists()]
        if not files:
            raise MissingDataError(f"no convergence histories under {artifacts}")
        out.mkdir(parents=True, exist_ok=True)
        for f in files:
            meta, rows = _read_convergence(f)
            lines = _header("convergence", meta["config"], meta["seed"])
            lines.append("# generation best mean")
            for r in rows:
                lines.append(f"{int(r[0])} {_fmt(r[1])} {_fmt(r[2])}")
            path = out / f"convergence_seed{meta['seed']}.dat"
            path.write_text("\n".join(lines) + "\n")
            written.append(path)

    elif kind == "swarm_scatter":
        files = [d / "snapshots.jsonl" for d in _run_dirs(artifacts)]
        files = [f for f in files if f.exists()]
        if not files:
            raise MissingDataError(
                f"no subswarm snapshots under {artifacts}; rerun with snapshot_every"
            )
        out.mkdir(parents=True, exist_ok=True)
        for f in files:
            records = [json.loads(line) for line in f.read_text().splitlines() if line]
            head = records[0]
            lines = _header("swarm_scatter", head["config"], head["seed"])
            dim = len(records[1]["positions"][0]) if len(records) > 1 else 0
            lines.append("# " + " ".join(f"x{d}" for d in range(dim)) + " cluster")
            for snap in records[1:]:
                lines.append("")
                lines.append("")
                lines.append(f"# generation {snap['generation']} clusters {snap['count']}")
                for pos, lab in zip(snap["positions"], snap["labels"]):
                    lines.append(" ".join(_fmt(v) for v in pos) + f" {lab}")
            path = out / f"swarm_scatter_seed{head['seed']}.dat"
            path.write_text("\n".join(lines) + "\n")
            written.append(path)

    else:
        index_path = artifacts / "sweep.json"
        if not index_path.exists():
            raise MissingDataError(f"{artifacts} is not a sweep directory")
        index = json.loads(index_path.read_text())
        if "gamma" not in index["parameters"]:
            raise MissingDataError("sweep did not vary gamma")
        out.mkdir(parents=True, exist_ok=True)
        lines = _header("gamma_sweep", index["base_config"])
        lines.append("# gamma median_final_cluster_count")
        for p in index["points"]:
            median = p["final_cluster_count_median"]
            median = math.nan if median is None else median
            lines.append(f"{_fmt(p['resolved_gamma'])} {_fmt(median)}")
        path = out / "gamma_sweep.dat"
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    return written
