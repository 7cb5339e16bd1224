"""Concrete hybrid systems and the name registry used by the CLI."""

from __future__ import annotations

from .bouncing_ball import BouncingBallConfig, make_bouncing_ball
from .geometry import Box
from .multicopter import MulticopterConfig, make_multicopter
from .multicopter import default_x0 as multicopter_default_x0
from .pinball import PinballConfig, make_pinball
from .pinball import X0_COLUMNS, default_x0 as pinball_default_x0

__all__ = [
    "Box",
    "BouncingBallConfig",
    "MulticopterConfig",
    "PinballConfig",
    "X0_COLUMNS",
    "make_bouncing_ball",
    "make_multicopter",
    "make_pinball",
    "make_system",
    "multicopter_default_x0",
    "pinball_default_x0",
    "SYSTEM_NAMES",
]

SYSTEM_NAMES = ("bouncing_ball", "pinball", "multicopter")


def _boxes_from_params(entries, default_paddle=False):
    out = []
    for e in entries:
        out.append(
            Box(
                float(e["xmin"]),
                float(e["xmax"]),
                float(e["ymin"]),
                float(e["ymax"]),
                restitution=float(e.get("restitution", 0.8)),
                is_paddle=bool(e.get("is_paddle", default_paddle)),
            )
        )
    return tuple(out)


def make_system(name: str, params: dict | None = None):
    """Build a named system from a flat parameter mapping (CLI config path)."""
    params = dict(params or {})
    if name == "bouncing_ball":
        cfg = BouncingBallConfig(**params)
        return make_bouncing_ball(cfg)
    if name == "pinball":
        if "paddles" in params:
            params["paddles"] = _boxes_from_params(params["paddles"], default_paddle=True)
        if "walls" in params:
            params["walls"] = _boxes_from_params(params["walls"])
        cfg = PinballConfig(**params)
        return make_pinball(cfg)
    if name == "multicopter":
        if "walls" in params:
            params["walls"] = _boxes_from_params(params["walls"])
        cfg = MulticopterConfig(**params)
        return make_multicopter(cfg)
    raise KeyError(f"unknown system {name!r}; available: {', '.join(SYSTEM_NAMES)}")
