"""Command-line runner: plan, benchmark, validate.

Exit codes: 0 success, 1 config error, 2 no plan found, 3 validation
failure.  No other codes are produced.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np
import yaml

from .config import RunConfig, load_config
from .core import SolutionPair, ValidationTolerances, validate_solution_pair
from .errors import ConfigError, NoPlanFound, TrajectorySchemaError
from .hyrrt import hyrrt_solve
from .hysst import hysst_solve
from .io_csv import (
    read_trajectory,
    trajectory_rows,
    write_summary,
    write_trajectory,
)
from .rng import RngStream

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NO_PLAN = 2
EXIT_INVALID = 3


def _solve(cfg: RunConfig):
    problem = cfg.build_problem()
    params = cfg.planner_params()
    rng = RngStream(cfg.seed)
    if cfg.planner == "hyrrt":
        return hyrrt_solve(problem, params, rng)
    return hysst_solve(problem, params, rng)


def _summary_values(cfg: RunConfig, success: bool, cost: float, stats) -> dict:
    return {
        "success": "true" if success else "false",
        "cost": repr(float(cost)),
        "iterations": stats.iterations,
        "vertex_count": stats.vertex_count,
        "witness_count": stats.witness_count,
        "solution_count": stats.solution_count,
        "seed": cfg.seed,
    }


def cmd_plan(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        cfg.seed = args.seed
    out_dir = args.out or cfg.out
    os.makedirs(out_dir, exist_ok=True)
    summary_path = os.path.join(out_dir, "summary.txt")
    try:
        result = _solve(cfg)
    except NoPlanFound as exc:
        write_summary(summary_path, _summary_values(cfg, False, math.nan, exc.stats))
        print(f"no plan found ({exc})", file=sys.stderr)
        return EXIT_NO_PLAN
    sys_obj = cfg.build_system()
    traj_path = os.path.join(out_dir, "trajectory.csv")
    rows = trajectory_rows(result.edges, result.plan.first)
    write_trajectory(traj_path, rows, sys_obj.state_dim, sys_obj.input_dim)
    write_summary(summary_path, _summary_values(cfg, True, result.cost, result.stats))
    print(traj_path)
    print(f"wall_time_ms={result.stats.wall_time_ms:.1f}", file=sys.stderr)
    return EXIT_OK


def _bench_run(cfg: RunConfig, seed: int):
    """One benchmark run; module-level so process pools can pickle it."""
    run_cfg = replace(cfg, seed=seed)
    try:
        result = _solve(run_cfg)
        return True, float(result.cost), result.stats.wall_time_ms
    except NoPlanFound as exc:
        return False, math.nan, exc.stats.wall_time_ms


def _parse_sweep(spec: str):
    if "=" not in spec:
        raise ConfigError(f"--sweep must look like key=v1,v2,..., got {spec!r}")
    key, _, values = spec.partition("=")
    parsed = [yaml.safe_load(v) for v in values.split(",") if v != ""]
    if not parsed:
        raise ConfigError(f"--sweep {spec!r} lists no values")
    return key.strip(), parsed


def cmd_benchmark(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.sweep:
            key, values = _parse_sweep(args.sweep)
            if not hasattr(cfg, key):
                raise ConfigError(f"unknown sweep parameter {key!r}")
        else:
            key, values = "none", [None]
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.runs < 1:
        print("config error: --runs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG

    tasks = []  # ordered by sweep point then seed index
    for value in values:
        point_cfg = cfg if value is None else replace(cfg, **{key: value})
        try:
            point_cfg.planner_params()
        except ValueError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        for i in range(args.runs):
            tasks.append((value, point_cfg, cfg.seed + i))

    workers = int(os.environ.get("HYPLAN_THREADS", "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_bench_run, [t[1] for t in tasks], [t[2] for t in tasks]))
    else:
        outcomes = [_bench_run(c, s) for _, c, s in tasks]

    out_dir = args.out or cfg.out
    os.makedirs(out_dir, exist_ok=True)
    table_path = os.path.join(out_dir, "benchmark.csv")
    lines = ["param,value,runs,successes,success_rate,min_cost,mean_cost,std_cost"]
    idx = 0
    for value in values:
        chunk = outcomes[idx : idx + args.runs]
        idx += args.runs
        costs = [c for ok, c, _ in chunk if ok]
        walls = [w for _, _, w in chunk]
        successes = len(costs)
        rate = successes / args.runs
        if costs:
            cmin = repr(float(min(costs)))
            cmean = repr(float(np.mean(costs)))
            cstd = repr(float(np.std(costs)))
        else:
            cmin = cmean = cstd = "nan"
        lines.append(
            f"{key},{value},{args.runs},{successes},{repr(rate)},{cmin},{cmean},{cstd}"
        )
        print(
            f"{key}={value}: mean wall time {np.mean(walls):.1f} ms",
            file=sys.stderr,
        )
    with open(table_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(table_path)
    return EXIT_OK


def _check_problem_conditions(cfg: RunConfig, samples, report):
    """Endpoint membership and unsafe sweep on a stored trajectory."""
    sys_obj = cfg.build_system()
    x0_list = cfg.initial_states()
    goal = cfg.goal_predicate()
    first, last = samples[0], samples[-1]
    if not any(np.allclose(first.state, x0, atol=1e-9) for x0 in x0_list):
        report.add(0, "InitialStateNotInX0", "initial sample not in the configured X0")
    if not goal(last.state, last.time):
        report.add(len(samples) - 1, "GoalNotReached", "terminal sample not in the goal set")
    for k, s in enumerate(samples):
        if sys_obj.in_unsafe_set(s.state, s.input):
            report.add(k, "UnsafeIntersection", "sample inside the unsafe set")


def cmd_validate(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    sys_obj = cfg.build_system()
    try:
        _, samples = read_trajectory(args.trajectory, sys_obj.state_dim, sys_obj.input_dim)
    except TrajectorySchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    for k in range(len(samples) - 1):
        a, b = samples[k], samples[k + 1]
        dt, dj = b.time.t - a.time.t, b.time.j - a.time.j
        if not ((dt > 0 and dj == 0) or (dt == 0 and dj == 1)):
            print(f"row {k + 2}: DomainMonotonicity: bad step {a.time} -> {b.time}")
            return EXIT_INVALID

    report = validate_solution_pair(
        SolutionPair(tuple(samples)), sys_obj, ValidationTolerances()
    )
    _check_problem_conditions(cfg, samples, report)
    for issue in report.issues:
        print(f"sample {issue.index}: {issue.code}: {issue.detail}")
    if report.issues:
        return EXIT_INVALID
    print("valid")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyplan")
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="run a configured solve")
    p_plan.add_argument("--config", required=True)
    p_plan.add_argument("--seed", type=int, default=None)
    p_plan.add_argument("--out", default=None)
    p_plan.set_defaults(func=cmd_plan)

    p_bench = sub.add_parser("benchmark", help="seeded multi-run statistics")
    p_bench.add_argument("--config", required=True)
    p_bench.add_argument("--runs", type=int, default=1)
    p_bench.add_argument("--sweep", default=None, metavar="key=v1,v2,...")
    p_bench.add_argument("--seed", type=int, default=None)
    p_bench.add_argument("--out", default=None)
    p_bench.set_defaults(func=cmd_benchmark)

    p_val = sub.add_parser("validate", help="validate a stored trajectory")
    p_val.add_argument("trajectory")
    p_val.add_argument("--config", required=True)
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
