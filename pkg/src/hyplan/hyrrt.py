"""HyRRT: probabilistically complete feasible planning for hybrid systems."""

from __future__ import annotations

import enum
import math
import time as _time
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .core import HybridSystem, HybridTime, Sample, SolutionPair
from .errors import NoPlanFound, NoQualifyingVertex, SamplingExhausted, StartNotInFlowSet
from .rng import RngStream
from .simulation import (
    FlowParams,
    TerminalReason,
    continuous_simulate,
    discrete_simulate,
)
from .tree import (
    Motion,
    PlannerProblem,
    SearchTree,
    euclidean,
    extract_path,
    init_tree,
    nearest_neighbor,
    path_edges,
    random_input,
    random_state,
)


@dataclass(frozen=True)
class HyrrtParams:
    p: float = 0.5
    K: int = 10000
    flow: FlowParams = FlowParams(Tm=0.4, flow_step=0.01)
    tau_reach: float = 1e-2

    def __post_init__(self):
        if not (0 < self.p < 1):
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.tau_reach < 0:
            raise ValueError("tau_reach must be nonnegative")


class ExtendStatus(enum.Enum):
    REACHED = "Reached"
    ADVANCED = "Advanced"
    TRAPPED = "Trapped"


@dataclass
class SolveStats:
    iterations: int = 0
    vertex_count: int = 0
    witness_count: int = 0
    solution_count: int = 0
    flow_regime_draws: int = 0
    jump_regime_draws: int = 0
    wall_time_ms: float = 0.0


@dataclass
class PlannerResult:
    plan: Optional[SolutionPair]
    cost: float
    stats: SolveStats
    goal_motion: Optional[Motion] = None
    edges: list = field(default_factory=list)


def _quantized_duration(rng: RngStream, flow: FlowParams) -> float:
    """Draw a flow duration uniformly over (0, Tm], rounded up to the step grid."""
    raw = (1.0 - rng.random()) * flow.Tm
    n = math.ceil(raw / flow.flow_step - 1e-12)
    return min(n * flow.flow_step, flow.Tm)


def new_state(
    v_cur: Motion,
    sys: HybridSystem,
    flow: FlowParams,
    rng: RngStream,
) -> Optional[Tuple[np.ndarray, SolutionPair, np.ndarray]]:
    """Propagate one edge from v_cur: pure flow, pure jump, or flow + one jump.

    The regime is forced by set membership, with a fair coin when the state
    is in C intersect D.  Returns None when the propagation is rejected
    (unsafe intersection or a state outside both sets).
    """
    x = v_cur.state
    in_c = sys.state_in_flow_set(x)
    in_d = sys.state_in_jump_set(x)
    if in_c and in_d:
        do_flow = rng.random() < 0.5
    elif in_c:
        do_flow = True
    elif in_d:
        do_flow = False
    else:
        return None

    if do_flow:
        u = random_input(sys.flow_input_bounds, rng)
        duration = _quantized_duration(rng, flow)
        try:
            result = continuous_simulate(sys, x, u, duration, flow, start_time=v_cur.time)
        except StartNotInFlowSet:
            return None
        if result.terminal_reason is TerminalReason.HIT_UNSAFE_SET:
            return None
        segment = result.segment
        if len(segment.samples) < 2:
            return None
        if result.terminal_reason is TerminalReason.HIT_JUMP_SET:
            u_d = random_input(sys.jump_input_bounds, rng)
            pre = segment.last
            if not sys.in_jump_set(pre.state, u_d):
                return None
            x_plus = discrete_simulate(sys, pre.state, u_d)
            if sys.in_unsafe_set(x_plus, u_d):
                return None
            # The pre-jump sample carries the jump input; the post-jump
            # sample's input is filled by the next edge at concatenation.
            samples = segment.samples[:-1] + (
                Sample(pre.time, pre.state, u_d),
                Sample(pre.time.shifted(0.0, 1), x_plus, np.zeros(sys.input_dim)),
            )
            segment = SolutionPair(samples)
        return segment.last.state, segment, u

    u_d = random_input(sys.jump_input_bounds, rng)
    if not sys.in_jump_set(x, u_d):
        return None
    x_plus = discrete_simulate(sys, x, u_d)
    if sys.in_unsafe_set(x_plus, u_d):
        return None
    segment = SolutionPair(
        (
            Sample(v_cur.time, x, u_d),
            Sample(v_cur.time.shifted(0.0, 1), x_plus, np.zeros(sys.input_dim)),
        )
    )
    return x_plus, segment, u_d


def truncate_at_goal(edge: SolutionPair, goal) -> SolutionPair:
    """Cut the edge at its first interior sample lying in the goal set.

    Edges are integrated at flow_step resolution, so the goal set can be
    crossed strictly between two vertex states.  Truncating here makes the
    terminal state of the returned plan an exact goal member.
    """
    for k, s in enumerate(edge.samples[1:], start=1):
        if goal(s.state, s.time):
            return SolutionPair(edge.samples[: k + 1])
    return edge


def extend(
    tree: SearchTree,
    x_rand: np.ndarray,
    problem: PlannerProblem,
    params: HyrrtParams,
    rng: RngStream,
    flag: str,
) -> Tuple[ExtendStatus, Optional[Motion]]:
    """One tree extension toward x_rand under the given regime flag."""
    constraint = (
        problem.constraint_flow if flag == "flow" else problem.constraint_jump
    )
    try:
        v_cur = nearest_neighbor(tree, x_rand, constraint, problem.distance)
    except NoQualifyingVertex:
        return ExtendStatus.TRAPPED, None
    result = new_state(v_cur, problem.system, params.flow, rng)
    if result is None:
        return ExtendStatus.TRAPPED, None
    x_new, edge, u = result
    edge = truncate_at_goal(edge, problem.goal)
    x_new = edge.last.state
    v_new = tree.add_vertex(x_new, edge.last.time)
    tree.add_edge(v_cur, v_new, edge, u)
    dist = (problem.distance or euclidean)(x_new, x_rand)
    status = ExtendStatus.REACHED if dist <= params.tau_reach else ExtendStatus.ADVANCED
    return status, v_new


def _sample_regime_state(problem: PlannerProblem, rng: RngStream, flag: str):
    sys = problem.system
    if flag == "flow":
        return random_state(
            sys.state_in_flow_set,
            sys.state_bounds,
            rng,
            max_attempts=problem.sample_max_attempts,
        )
    # Systems that provide a jump-set sampler declare D to have zero
    # measure in the state box, so rejection sampling would always
    # exhaust; use the hook directly.
    if sys.jump_set_sampler is not None:
        return np.asarray(sys.jump_set_sampler(rng), dtype=float)
    return random_state(
        sys.state_in_jump_set,
        sys.state_bounds,
        rng,
        max_attempts=problem.sample_max_attempts,
    )


def hyrrt_solve(
    problem: PlannerProblem, params: HyrrtParams, rng: RngStream
) -> PlannerResult:
    """Run the HyRRT main loop until the goal set is reached or K is exhausted.

    Raises NoPlanFound (carrying the solve statistics) on exhaustion.
    """
    t_start = _time.perf_counter()
    sys = problem.system
    tree = init_tree(problem.X0, sys.state_bounds, sys.input_dim)
    stats = SolveStats()

    def finish(goal_motion: Motion) -> PlannerResult:
        plan = extract_path(tree, goal_motion)
        end = plan.last.time
        start = plan.first.time
        cost = (end.t - start.t) + (end.j - start.j)
        stats.vertex_count = len(tree)
        stats.wall_time_ms = (_time.perf_counter() - t_start) * 1e3
        return PlannerResult(plan, cost, stats, goal_motion, path_edges(tree, goal_motion))

    for rid in tree.roots:
        root = tree.motions[rid]
        if problem.goal(root.state, root.time):
            return finish(root)

    for k in range(1, params.K + 1):
        stats.iterations = k
        r = rng.random()
        flag = "flow" if r <= params.p else "jump"
        if flag == "flow":
            stats.flow_regime_draws += 1
        else:
            stats.jump_regime_draws += 1
        try:
            x_rand = _sample_regime_state(problem, rng, flag)
        except SamplingExhausted:
            continue
        _, v_new = extend(tree, x_rand, problem, params, rng, flag)
        if v_new is not None and problem.goal(v_new.state, v_new.time):
            return finish(v_new)

    stats.vertex_count = len(tree)
    stats.wall_time_ms = (_time.perf_counter() - t_start) * 1e3
    raise NoPlanFound(f"no plan after {params.K} iterations", stats=stats)
