"""Axis-aligned box obstacles and impact-face resolution for the 2-D examples."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Face name -> outward unit normal.
FACE_NORMALS = {
    "left": np.array([-1.0, 0.0]),
    "right": np.array([1.0, 0.0]),
    "bottom": np.array([0.0, -1.0]),
    "top": np.array([0.0, 1.0]),
}
FACE_ORDER = ("left", "right", "bottom", "top")


@dataclass(frozen=True)
class Box:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    restitution: float = 0.8
    is_paddle: bool = False

    def contains(self, p) -> bool:
        return self.xmin <= p[0] <= self.xmax and self.ymin <= p[1] <= self.ymax

    def face_depths(self, p) -> dict:
        """Penetration depth past each face plane (valid when p is inside)."""
        return {
            "left": p[0] - self.xmin,
            "right": self.xmax - p[0],
            "bottom": p[1] - self.ymin,
            "top": self.ymax - p[1],
        }

    def depth(self, p) -> float:
        """Penetration depth of p into the box; negative when outside."""
        dx = min(p[0] - self.xmin, self.xmax - p[0])
        dy = min(p[1] - self.ymin, self.ymax - p[1])
        return min(dx, dy)

    def resolve_face(self, p, v) -> str:
        """Impact face for a point inside the box.

        Picks the face with smallest penetration depth; near-ties go to the
        face whose outward normal most directly opposes the velocity (the
        face hit first along the reversed velocity ray).
        """
        depths = self.face_depths(p)
        dmin = min(depths.values())
        candidates = [f for f in FACE_ORDER if depths[f] <= dmin + 1e-12]
        if len(candidates) == 1:
            return candidates[0]
        return max(candidates, key=lambda f: -float(np.dot(v, FACE_NORMALS[f])))

    def face_span(self, face: str):
        """(fixed coordinate, variable lo, variable hi) for sampling a face point."""
        if face == "left":
            return self.xmin, self.ymin, self.ymax
        if face == "right":
            return self.xmax, self.ymin, self.ymax
        if face == "bottom":
            return self.ymin, self.xmin, self.xmax
        return self.ymax, self.xmin, self.xmax


def find_containing_box(boxes, p):
    for box in boxes:
        if box.contains(p):
            return box
    return None


def max_depth(boxes, p) -> float:
    """Deepest penetration of p across all boxes; -inf when outside all."""
    best = -math.inf
    for box in boxes:
        if box.contains(p):
            best = max(best, box.depth(p))
    return best


def decompose(v, n_out):
    """Split v into (normal, tangential) components w.r.t. an outward normal."""
    tau = np.array([-n_out[1], n_out[0]])
    return float(np.dot(v, n_out)), float(np.dot(v, tau)), tau


def recompose(v_n, v_t, n_out, tau):
    return v_n * n_out + v_t * tau
