"""Flow propagation, jump application, and point-by-point collision checking."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import HybridSystem, HybridTime, Sample, SolutionPair
from .errors import InvalidDuration, StartNotInFlowSet, StateNotInJumpSet
from .integrators import rk4_step


@dataclass(frozen=True)
class FlowParams:
    """Maximum flow time per edge and the fixed integration step."""

    Tm: float
    flow_step: float

    def __post_init__(self):
        if not (0 < self.flow_step <= self.Tm):
            raise ValueError(
                f"need 0 < flow_step <= Tm, got step={self.flow_step}, Tm={self.Tm}"
            )


class TerminalReason(enum.Enum):
    MAX_TIME_REACHED = "MaxTimeReached"
    HIT_JUMP_SET = "HitJumpSet"
    HIT_UNSAFE_SET = "HitUnsafeSet"


@dataclass(frozen=True)
class PropagationResult:
    segment: SolutionPair
    terminal_state: np.ndarray
    terminal_reason: TerminalReason


def continuous_simulate(
    sys: HybridSystem,
    x0: np.ndarray,
    u: np.ndarray,
    duration: float,
    params: FlowParams,
    start_time: HybridTime = HybridTime(0.0, 0),
) -> PropagationResult:
    """Propagate x' = f(x, u) with fixed-step RK4 and zero-order-hold input.

    Stops early at the first integrated sample inside the unsafe set
    (HitUnsafeSet) or the jump set (HitJumpSet); jump detection starts at
    the first step so a start state in C intersect D can still flow.  If
    duration is not a multiple of flow_step a single shorter final step is
    taken.  Jump-crossing overshoot is bounded by one step.
    """
    if not (0 < duration <= params.Tm):
        raise InvalidDuration(f"duration must be in (0, Tm], got {duration}")
    x0 = np.asarray(x0, dtype=float)
    u = np.asarray(u, dtype=float)
    if not sys.in_flow_set(x0, u):
        raise StartNotInFlowSet("x0 is not in the flow set for input u")

    samples = [Sample(start_time, x0, u)]
    if sys.in_unsafe_set(x0, u):
        return PropagationResult(
            SolutionPair(tuple(samples)), x0, TerminalReason.HIT_UNSAFE_SET
        )

    n_full = int(math.floor(duration / params.flow_step + 1e-12))
    steps = [params.flow_step] * n_full
    rem = duration - n_full * params.flow_step
    if rem > 1e-12:
        steps.append(rem)

    x = x0
    t = start_time.t
    j = start_time.j
    reason = TerminalReason.MAX_TIME_REACHED
    for dt in steps:
        x = rk4_step(sys.flow_map, x, u, dt)
        t += dt
        samples.append(Sample(HybridTime(t, j), x, u))
        if sys.in_unsafe_set(x, u):
            reason = TerminalReason.HIT_UNSAFE_SET
            break
        if sys.in_jump_set(x, u):
            reason = TerminalReason.HIT_JUMP_SET
            break
    return PropagationResult(SolutionPair(tuple(samples)), x, reason)


def discrete_simulate(sys: HybridSystem, x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Apply the jump map once: returns g(x, u) exactly."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if not sys.in_jump_set(x, u):
        raise StateNotInJumpSet("state is not in the jump set for input u")
    return np.asarray(sys.jump_map(x, u), dtype=float)


def collision_check(segment: SolutionPair, sys: HybridSystem):
    """Truncate a segment at its first sample inside the jump set.

    Returns (collided, truncated); the colliding sample is kept as the new
    terminal sample.  The input segment is never modified.
    """
    for k, s in enumerate(segment.samples):
        if sys.in_jump_set(s.state, s.input):
            return True, SolutionPair(segment.samples[: k + 1])
    return False, segment
