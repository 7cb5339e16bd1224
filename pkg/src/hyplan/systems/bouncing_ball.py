"""Bouncing ball: the analytically tractable oracle system.

State (h, v): height and vertical velocity.  Flow is free fall, the jump
is an impact with restitution e applied at the floor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import HybridSystem


@dataclass(frozen=True)
class BouncingBallConfig:
    e: float = 0.8
    gravity: float = 9.81
    h_max: float = 2.0
    v_max: float = 8.0

    def __post_init__(self):
        if not (0 < self.e <= 1):
            raise ValueError(f"restitution must be in (0, 1], got {self.e}")
        if self.gravity <= 0:
            raise ValueError("gravity must be positive")


def make_bouncing_ball(cfg: BouncingBallConfig = BouncingBallConfig()) -> HybridSystem:
    g = cfg.gravity
    e = cfg.e

    def flow_map(x, u):
        return np.array([x[1], -g])

    def jump_map(x, u):
        return np.array([0.0, -e * x[1]])

    def in_jump_set(x, u):
        return x[0] <= 0.0 and x[1] < 0.0

    def in_flow_set(x, u):
        return x[0] >= 0.0 and not in_jump_set(x, u)

    def in_unsafe_set(x, u):
        return False

    def jump_set_sampler(rng):
        # The jump set is the measure-zero line h = 0, v < 0.
        return np.array([0.0, rng.uniform(-cfg.v_max, 0.0)])

    return HybridSystem(
        name="bouncing_ball",
        state_dim=2,
        input_dim=1,
        state_bounds=((0.0, cfg.h_max), (-cfg.v_max, cfg.v_max)),
        flow_map=flow_map,
        jump_map=jump_map,
        in_flow_set=in_flow_set,
        in_jump_set=in_jump_set,
        in_unsafe_set=in_unsafe_set,
        flow_input_bounds=((0.0, 0.0),),
        jump_input_bounds=((0.0, 0.0),),
        jump_set_sampler=jump_set_sampler,
    )
