#!/usr/bin/env python3
"""Plan and validate every bundled example configuration.

For each YAML in configs/ this runs `plan` followed by `validate` on the
produced trajectory and prints one status line per config.

Usage:
    python3 scripts/run_examples.py [--out results/examples]
"""

import argparse
import glob
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hyplan.cli import main as cli_main


def run(out_root: str) -> int:
    cfg_dir = os.path.join(os.path.dirname(__file__), "..", "configs")
    worst = 0
    for path in sorted(glob.glob(os.path.join(cfg_dir, "*.yaml"))):
        name = os.path.splitext(os.path.basename(path))[0]
        out = os.path.join(out_root, name)
        code = cli_main(["plan", "--config", path, "--out", out])
        traj = os.path.join(out, "trajectory.csv")
        if code == 0:
            code = cli_main(["validate", traj, "--config", path])
        status = "ok" if code == 0 else f"exit {code}"
        print(f"{name}: {status}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/examples")
    args = ap.parse_args()
    raise SystemExit(run(args.out))
