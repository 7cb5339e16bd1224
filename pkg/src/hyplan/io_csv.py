"""Trajectory CSV and run-summary serialization.

CSV schema (bit-exact header): ``edge_id,t,j,x0,...,x{n-1},u0,...,u{m-1}``.
Reals are serialized with Python's shortest round-trippable repr, so a
write -> parse -> write cycle is byte-identical.  Jump rows repeat t with
an incremented j.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

from .core import HybridTime, Sample, SolutionPair
from .errors import TrajectorySchemaError


def _fmt(v: float) -> str:
    return repr(float(v))


def header(n: int, m: int) -> str:
    cols = ["edge_id", "t", "j"]
    cols += [f"x{i}" for i in range(n)]
    cols += [f"u{i}" for i in range(m)]
    return ",".join(cols)


def trajectory_rows(edges: Sequence[SolutionPair], root_sample: Sample):
    """Flatten a path's edges into (edge_id, sample) rows.

    The junction sample between consecutive edges is attributed to the
    incoming edge, matching the concatenation convention.  A rootless,
    zero-length plan yields the single root sample under edge id 0.
    """
    if not edges:
        return [(0, root_sample)]
    rows: List[Tuple[int, Sample]] = []
    for i, edge in enumerate(edges):
        samples = edge.samples if i == len(edges) - 1 else edge.samples[:-1]
        rows.extend((i, s) for s in samples)
    return rows


def write_trajectory(path, rows, n: int, m: int):
    lines = [header(n, m)]
    for edge_id, s in rows:
        fields = [str(int(edge_id)), _fmt(s.time.t), str(int(s.time.j))]
        fields += [_fmt(v) for v in s.state]
        fields += [_fmt(v) for v in s.input]
        lines.append(",".join(fields))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trajectory(path, n: int, m: int):
    """Parse a trajectory CSV into (edge_ids, samples).

    Raises TrajectorySchemaError on a wrong header, wrong column count, or
    non-numeric fields.  Domain monotonicity is *not* enforced here; the
    validator reports it as a finding.
    """
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise TrajectorySchemaError(f"{path}: empty trajectory file")
    expected = header(n, m)
    if lines[0] != expected:
        raise TrajectorySchemaError(
            f"{path}: bad header; expected {expected!r}, got {lines[0]!r}"
        )
    if len(lines) < 2:
        raise TrajectorySchemaError(f"{path}: no samples")
    edge_ids: List[int] = []
    samples: List[Sample] = []
    ncols = 3 + n + m
    for row_no, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != ncols:
            raise TrajectorySchemaError(
                f"{path}:{row_no}: expected {ncols} columns, got {len(parts)}"
            )
        try:
            edge_ids.append(int(parts[0]))
            t = float(parts[1])
            j = int(parts[2])
            state = np.array([float(v) for v in parts[3 : 3 + n]])
            inp = np.array([float(v) for v in parts[3 + n :]])
        except ValueError as exc:
            raise TrajectorySchemaError(f"{path}:{row_no}: {exc}") from exc
        samples.append(Sample(HybridTime(t, j), state, inp))
    return edge_ids, samples


SUMMARY_KEYS = (
    "success",
    "cost",
    "iterations",
    "vertex_count",
    "witness_count",
    "solution_count",
    "seed",
)


def write_summary(path, values: dict):
    """Flat key=value summary with a stable key order.

    Wall-clock time is deliberately not serialized so repeated runs of the
    same config and seed produce byte-identical files.
    """
    with open(path, "w") as fh:
        for key in SUMMARY_KEYS:
            fh.write(f"{key}={values[key]}\n")


def read_summary(path) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            if "=" in line:
                k, v = line.rstrip("\n").split("=", 1)
                out[k] = v
    return out
