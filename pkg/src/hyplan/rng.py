"""Deterministic random stream used by the planners.

One stream is created per solve.  The stream wraps numpy's counter-based
Philox generator, which produces identical draw sequences for identical
seeds on every platform.  All planner randomness flows through this
object in a fixed, documented order (see hyrrt.py):

    per iteration: regime draw r, then x_rand draws (one per state
    dimension per rejection attempt, or the system's jump-set sampler
    draws), then inside new_state: the flow/jump coin if the state is in
    C intersect D, then one draw per input dimension, then the flow
    duration draw (flow regime only).
"""

from __future__ import annotations

import numpy as np


class RngStream:
    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.Philox(self.seed))

    def random(self) -> float:
        """Uniform draw from [0, 1)."""
        return float(self._gen.random())

    def uniform(self, lo: float, hi: float) -> float:
        """Uniform on [lo, hi]; returns lo exactly when the bound is degenerate."""
        return lo + (hi - lo) * self.random()

    def uniform_box(self, bounds) -> np.ndarray:
        """One uniform draw per (lo, hi) pair, consumed as a single vector draw."""
        arr = np.asarray(bounds, dtype=float)
        r = self._gen.random(arr.shape[0])
        return arr[:, 0] + (arr[:, 1] - arr[:, 0]) * r

    def choice_index(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        return min(int(self.random() * n), n - 1)
