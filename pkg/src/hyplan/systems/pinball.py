"""Modified pinball game: a falling ball among paddles and side walls.

State (p_x, p_y, v_x, v_y, a_x, a_y); the flow input is a jerk on the
acceleration.  Impacts reflect the velocity component normal to the hit
face with a restitution coefficient; paddle impacts additionally accept
an impulse input (normal on vertical paddle sides, tangential on the
paddle top).  The acceleration resets to zero at every jump.
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


def _default_paddles():
    # Two overlapping bands so no jump-free descent exists: any vertical
    # line through the arena crosses a paddle, and the fall between the
    # bands is too short to steer around the overlap with bounded jerk.
    return (
        Box(0.0, 3.2, -2.4, -2.0, restitution=0.4, is_paddle=True),
        Box(1.8, 5.0, -4.0, -3.6, restitution=0.4, is_paddle=True),
    )


def _default_walls():
    return (
        Box(-0.5, 0.0, -12.0, 0.5, restitution=0.8),
        Box(5.0, 5.5, -12.0, 0.5, restitution=0.8),
    )


@dataclass(frozen=True)
class PinballConfig:
    paddles: tuple = field(default_factory=_default_paddles)
    walls: tuple = field(default_factory=_default_walls)
    u_max: float = 4.0
    gravity: float = 9.81
    tau_surface: float = 0.16

    def __post_init__(self):
        for b in self.paddles:
            if not (0.0 <= b.xmin and b.xmax <= 5.0):
                raise ValueError("paddles must lie within the arena x in [0, 5]")

    @property
    def boxes(self) -> tuple:
        return self.paddles + self.walls


# Initial x positions of the six standard roots; each root is at rest at
# y = 0 with gravity preloaded on a_y.
X0_COLUMNS = (0.5, 1.0, 2.0, 3.5, 4.0, 4.5)


def default_x0(cfg: PinballConfig = PinballConfig()):
    return [np.array([c, 0.0, 0.0, 0.0, 0.0, -cfg.gravity]) for c in X0_COLUMNS]


def make_pinball(cfg: PinballConfig = PinballConfig()) -> HybridSystem:
    boxes = cfg.boxes
    tau = cfg.tau_surface
    u = cfg.u_max

    def flow_map(x, uu):
        return np.array([x[2], x[3], x[4], x[5], uu[0], uu[1]])

    def in_jump_set(x, uu):
        box = find_containing_box(boxes, x[:2])
        if box is None:
            return False
        face = box.resolve_face(x[:2], x[2:4])
        # Inward motion: velocity against the outward normal of the hit face.
        return float(np.dot(x[2:4], FACE_NORMALS[face])) <= 0.0

    def in_flow_set(x, uu):
        return max_depth(boxes, x[:2]) <= tau

    def in_unsafe_set(x, uu):
        px, py = x[0], x[1]
        if py < -10.0 and (0.0 <= px < 1.0 or 4.0 < px <= 5.0):
            return True
        return max_depth(boxes, x[:2]) > tau

    def jump_map(x, uu):
        p, v = x[:2], x[2:4]
        box = find_containing_box(boxes, p)
        if box is None:
            raise ValueError("jump map evaluated outside the obstacle region")
        face = box.resolve_face(p, v)
        n_out = FACE_NORMALS[face]
        v_n, v_t, t_dir = decompose(v, n_out)
        v_n_new = -box.restitution * v_n
        if box.is_paddle and face in ("left", "right") and v_n != 0.0:
            # The paddle impulse acts along the bounce direction.
            v_n_new += math.copysign(abs(uu[0]), -v_n)
        v_t_new = v_t
        if box.is_paddle and face == "top":
            v_t_new += uu[1]
        v_plus = recompose(v_n_new, v_t_new, n_out, t_dir)
        return np.array([p[0], p[1], v_plus[0], v_plus[1], 0.0, 0.0])

    def jump_set_sampler(rng):
        box = boxes[rng.choice_index(len(boxes))]
        face = ("left", "right", "bottom", "top")[rng.choice_index(4)]
        fixed, lo, hi = box.face_span(face)
        coord = rng.uniform(lo, hi)
        p = (fixed, coord) if face in ("left", "right") else (coord, fixed)
        v = np.array([rng.uniform(-14.0, 14.0), rng.uniform(-14.0, 14.0)])
        n_out = FACE_NORMALS[face]
        if float(np.dot(v, n_out)) > 0.0:
            v = v - 2.0 * float(np.dot(v, n_out)) * n_out
        a = np.array([rng.uniform(-12.0, 12.0), rng.uniform(-12.0, 12.0)])
        return np.array([p[0], p[1], v[0], v[1], a[0], a[1]])

    return HybridSystem(
        name="pinball",
        state_dim=6,
        input_dim=2,
        state_bounds=(
            (-0.5, 5.5),
            (-11.0, 0.5),
            (-14.0, 14.0),
            (-14.0, 14.0),
            (-12.0, 12.0),
            (-12.0, 12.0),
        ),
        flow_map=flow_map,
        jump_map=jump_map,
        in_flow_set=in_flow_set,
        in_jump_set=in_jump_set,
        in_unsafe_set=in_unsafe_set,
        flow_input_bounds=((-u, u), (-u, u)),
        jump_input_bounds=((-u, u), (-u, u)),
        jump_set_sampler=jump_set_sampler,
    )
