"""Command-line entry point: ``fireflyopt <verb> ...``.

Verbs: ``run``, ``sweep``, ``plot-data``, ``verify-reductions``,
``list-benchmarks``. Failures exit nonzero and print a JSON error record
on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .benchmarks import BENCHMARK_NAMES, benchmark_spec
from .core import ConfigurationError, FaParams, ParameterError
from .diagnostics import DiagnosticUnavailableError
from .experiment import (
    PLOT_KINDS,
    ExperimentConfig,
    MissingDataError,
    emit_plot_data,
    parse_seeds,
    run_experiment,
    run_sweep,
)
from .reductions import VARIANTS, ReductionConfig, verify_reduction

EXIT_OK = 0
EXIT_RUN_FAILED = 1
EXIT_USAGE = 2

# flags that map one-to-one onto configuration keys
_OVERRIDES = (
    "benchmark", "dimension", "alpha0", "theta", "beta0", "population_size",
    "max_generations", "target_fitness", "max_evaluations", "snapshot_every",
    "coverage_tol", "output_dir", "workers",
)


def _gamma(text):
    return None if text == "auto" else float(text)


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON key-value configuration file")
    p.add_argument("--benchmark", choices=BENCHMARK_NAMES)
    p.add_argument("--dim", dest="dimension", type=int)
    p.add_argument("--alpha0", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--beta0", type=float)
    p.add_argument("--gamma", type=_gamma, default=argparse.SUPPRESS,
                   help="absorption coefficient, or 'auto' to estimate it")
    p.add_argument("-n", "--population-size", dest="population_size", type=int)
    p.add_argument("--max-generations", type=int)
    p.add_argument("--seeds", help="e.g. '0,1,2' or '0-19'")
    p.add_argument("--n-seeds", type=int)
    p.add_argument("--target-fitness", type=float)
    p.add_argument("--max-evaluations", type=int)
    p.add_argument("--snapshot-every", type=int)
    p.add_argument("--mode-coverage", action="store_true", default=None)
    p.add_argument("--coverage-tol", type=float)
    p.add_argument("-o", "--out", dest="output_dir")
    p.add_argument("--workers", type=int)


def _experiment_config(args) -> ExperimentConfig:
    overrides = {k: getattr(args, k) for k in _OVERRIDES if getattr(args, k, None) is not None}
    if hasattr(args, "gamma"):
        overrides["gamma"] = args.gamma
    if args.seeds is not None:
        overrides["seeds"] = parse_seeds(args.seeds)
    elif args.n_seeds is not None:
        overrides["seeds"] = list(range(args.n_seeds))
    if args.mode_coverage:
        overrides["mode_coverage"] = True
    if args.config is not None:
        return ExperimentConfig.from_file(args.config, overrides)
    return ExperimentConfig.from_mapping(overrides)


def cmd_run(args) -> int:
    result = run_experiment(_experiment_config(args))
    print(json.dumps(result.summary, sort_keys=True))
    return EXIT_RUN_FAILED if result.failed else EXIT_OK


def cmd_sweep(args) -> int:
    grid = {}
    for spec in args.param:
        name, sep, values = spec.partition("=")
        if not sep or not values:
            raise ConfigurationError(f"--param expects NAME=V1,V2,..., got {spec!r}")
        grid[name.strip()] = [v.strip() for v in values.split(",")]
    index = run_sweep(_experiment_config(args), grid)
    print(json.dumps(index, sort_keys=True))
    failed = any(p["failed_seeds"] for p in index["points"])
    return EXIT_RUN_FAILED if failed else EXIT_OK


def cmd_plot_data(args) -> int:
    for kind in args.kind:
        for path in emit_plot_data(args.artifacts, kind, args.out):
            print(path)
    return EXIT_OK


def cmd_verify_reductions(args) -> int:
    from .benchmarks import make_benchmark

    problem = make_benchmark(args.benchmark, args.dim)
    variants = VARIANTS if args.variant == "all" else (args.variant,)
    lines = []
    all_passed = True
    for variant in variants:
        if variant == "de_like":
            params = FaParams(0.0, args.theta, args.beta0, 0.0, args.n, args.steps)
        elif variant == "apso":
            params = FaParams(args.alpha0, args.theta, args.beta0, 0.0, args.n, args.steps)
        else:
            params = FaParams(args.alpha0, args.theta, 0.0, None, args.n, args.steps)
        for seed in parse_seeds(args.seeds):
            report = verify_reduction(ReductionConfig(variant, params, seed), problem, args.steps)
            all_passed &= report.passed
            lines.append(report.to_json())
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    if args.require_pass and not all_passed:
        return EXIT_RUN_FAILED
    return EXIT_OK


def cmd_list_benchmarks(args) -> int:
    for name in BENCHMARK_NAMES:
        spec = benchmark_spec(name, 2)
        fixed = name in ("himmelblau", "two_wells")
        entry = {
            "name": name,
            "dimension": 2 if fixed else "any",
            "bounds_2d": [list(spec.lower), list(spec.upper)],
            "optimum": spec.optimum,
            "n_modes": len(spec.modes),
            "description": spec.description,
        }
        if args.json:
            print(json.dumps(entry, sort_keys=True))
        else:
            print(f"{name:<11} dim={entry['dimension']:<4} optimum={spec.optimum:<5g} "
                  f"modes={len(spec.modes)}  {spec.description}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        record = {"error": "UsageError", "message": message, "verb": self.prog}
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        self.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fireflyopt", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="execute an experiment")
    _add_experiment_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="cross product over parameter values")
    _add_experiment_flags(p)
    p.add_argument("--param", action="append", required=True,
                   help="NAME=V1,V2,...; gamma accepts 'auto' and '<k>*auto'")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plot-data", help="emit plain-text series from artifacts")
    p.add_argument("artifacts", type=Path)
    p.add_argument("--kind", action="append", choices=PLOT_KINDS, required=True)
    p.add_argument("-o", "--out", type=Path)
    p.set_defaults(func=cmd_plot_data)

    p = sub.add_parser("verify-reductions", help="engine vs special-case trajectories")
    p.add_argument("--variant", choices=VARIANTS + ("all",), default="all")
    p.add_argument("--benchmark", choices=BENCHMARK_NAMES, default="sphere")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("-n", type=int, default=5)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--seeds", default="0-4")
    p.add_argument("--alpha0", type=float, default=0.1)
    p.add_argument("--beta0", type=float, default=0.5)
    p.add_argument("--theta", type=float, default=0.97)
    p.add_argument("-o", "--out")
    p.add_argument("--require-pass", action="store_true",
                   help="exit nonzero if any report fails")
    p.set_defaults(func=cmd_verify_reductions)

    p = sub.add_parser("list-benchmarks", help="show available objectives")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_list_benchmarks)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigurationError, ParameterError, MissingDataError,
            DiagnosticUnavailableError, OSError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc), "verb": args.verb}
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
