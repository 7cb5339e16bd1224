#!/usr/bin/env python3
"""Batch-size sweep on the bouncing ball: does a larger solution batch
lower the returned cost?

Runs the benchmark subcommand over batch_size in {1, 3, 5} with 15
seeded runs each and prints the resulting table.

Usage:
    python3 scripts/batch_size_study.py [--runs 15] [--out results/batch_study]
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hyplan.cli import main as cli_main


def run(runs: int, out: str) -> int:
    cfg = os.path.join(os.path.dirname(__file__), "..", "configs", "bouncing_ball_hysst.yaml")
    code = cli_main(
        [
            "benchmark",
            "--config",
            cfg,
            "--runs",
            str(runs),
            "--sweep",
            "batch_size=1,3,5",
            "--out",
            out,
        ]
    )
    if code != 0:
        return code
    table = os.path.join(out, "benchmark.csv")
    with open(table) as fh:
        print(fh.read(), end="")
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runs", type=int, default=15)
    ap.add_argument("--out", default="results/batch_study")
    args = ap.parse_args()
    raise SystemExit(run(args.runs, args.out))
