"""Collision-resilient multicopter in the horizontal plane.

Triple-integrator flight among wall boxes; collisions reflect the normal
velocity with restitution e and couple into the tangential velocity
through an arctan term scaled by kappa.  The acceleration resets to zero
at every impact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..core import HybridSystem
from .geometry import (
    FACE_NORMALS,
    Box,
    decompose,
    find_containing_box,
    max_depth,
    recompose,
)


def _default_walls():
    return (Box(3.0, 3.4, 0.0, 3.0, restitution=0.8),)


@dataclass(frozen=True)
class MulticopterConfig:
    walls: tuple = field(default_factory=_default_walls)
    e: float = 0.8
    kappa: float = 0.25
    u_max: float = 3.0
    tau_surface: float = 0.06

    def __post_init__(self):
        if not (0 < self.e < 1):
            raise ValueError(f"restitution must be in (0, 1), got {self.e}")
        if not math.isfinite(self.kappa):
            raise ValueError("kappa must be finite")


def default_x0(cfg: MulticopterConfig = MulticopterConfig()):
    return [np.array([1.0, 2.0, 0.0, 0.0, 0.0, 0.0])]


def make_multicopter(cfg: MulticopterConfig = MulticopterConfig()) -> HybridSystem:
    walls = cfg.walls
    tau = cfg.tau_surface
    e = cfg.e
    kappa = cfg.kappa
    u = cfg.u_max

    def flow_map(x, uu):
        return np.array([x[2], x[3], x[4], x[5], uu[0], uu[1]])

    def in_jump_set(x, uu):
        box = find_containing_box(walls, x[:2])
        if box is None:
            return False
        face = box.resolve_face(x[:2], x[2:4])
        return float(np.dot(x[2:4], FACE_NORMALS[face])) < 0.0

    def in_flow_set(x, uu):
        return max_depth(walls, x[:2]) <= tau

    def in_unsafe_set(x, uu):
        px, py = x[0], x[1]
        if px <= 0.0 or px >= 6.0 or py <= 0.0 or py >= 5.0:
            return True
        return max_depth(walls, x[:2]) > tau

    def jump_map(x, uu):
        p, v = x[:2], x[2:4]
        box = find_containing_box(walls, p)
        if box is None:
            raise ValueError("jump map evaluated outside the wall region")
        face = box.resolve_face(p, v)
        n_out = FACE_NORMALS[face]
        v_n, v_t, t_dir = decompose(v, n_out)
        v_n_new = -e * v_n
        v_t_new = v_t + kappa * (-e - 1.0) * (math.atan(v_t / v_n) if v_n != 0.0 else 0.0)
        v_plus = recompose(v_n_new, v_t_new, n_out, t_dir)
        return np.array([p[0], p[1], v_plus[0], v_plus[1], 0.0, 0.0])

    def jump_set_sampler(rng):
        box = walls[rng.choice_index(len(walls))]
        face = ("left", "right", "bottom", "top")[rng.choice_index(4)]
        fixed, lo, hi = box.face_span(face)
        coord = rng.uniform(lo, hi)
        p = (fixed, coord) if face in ("left", "right") else (coord, fixed)
        v = np.array([rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)])
        n_out = FACE_NORMALS[face]
        vn = float(np.dot(v, n_out))
        if vn >= 0.0:
            v = v - (2.0 * vn + 0.1) * n_out
        a = np.array([rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)])
        return np.array([p[0], p[1], v[0], v[1], a[0], a[1]])

    return HybridSystem(
        name="multicopter",
        state_dim=6,
        input_dim=2,
        state_bounds=(
            (0.0, 6.0),
            (0.0, 5.0),
            (-4.0, 4.0),
            (-4.0, 4.0),
            (-4.0, 4.0),
            (-4.0, 4.0),
        ),
        flow_map=flow_map,
        jump_map=jump_map,
        in_flow_set=in_flow_set,
        in_jump_set=in_jump_set,
        in_unsafe_set=in_unsafe_set,
        flow_input_bounds=((-u, u), (-u, u)),
        jump_input_bounds=((0.0, 0.0), (0.0, 0.0)),
        jump_set_sampler=jump_set_sampler,
    )
