"""HySST: asymptotically near-optimal planning with witness-based pruning."""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .core import HybridTime, SolutionPair
from .errors import NoActiveVertex, NoPlanFound, SamplingExhausted
from .hyrrt import (
    HyrrtParams,
    PlannerResult,
    SolveStats,
    _sample_regime_state,
    new_state,
    truncate_at_goal,
)
from .rng import RngStream
from .simulation import FlowParams
from .tree import (
    Motion,
    PlannerProblem,
    SearchTree,
    euclidean,
    extract_path,
    init_tree,
    path_edges,
)


def hybrid_time_cost(edge: SolutionPair) -> float:
    """Default edge cost: elapsed hybrid time, delta t + delta j."""
    end, start = edge.last.time, edge.first.time
    return (end.t - start.t) + (end.j - start.j)


@dataclass(frozen=True)
class HysstParams(HyrrtParams):
    eps_bn: float = 0.5
    eps_s: float = 0.1
    batch_size: int = 1
    cost_functional: Callable[[SolutionPair], float] = hybrid_time_cost

    def __post_init__(self):
        super().__post_init__()
        if self.eps_bn <= 0 or self.eps_s <= 0:
            raise ValueError("selection and pruning radii must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class Witness:
    """A static sparsification point and its lowest-cost representative vertex."""

    state: np.ndarray
    rep: Optional[int] = None


class WitnessSet:
    """Witness store with the same vectorized exact-nearest scan as the tree."""

    def __init__(self, state_dim: int):
        self.witnesses: List[Witness] = []
        self._cap = 64
        self._states = np.full((self._cap, state_dim), np.inf)

    def __len__(self):
        return len(self.witnesses)

    def add(self, state: np.ndarray) -> int:
        idx = len(self.witnesses)
        if idx >= self._cap:
            self._cap *= 2
            fresh = np.full((self._cap,) + self._states.shape[1:], np.inf)
            fresh[:idx] = self._states[:idx]
            self._states = fresh
        self.witnesses.append(Witness(np.asarray(state, dtype=float)))
        self._states[idx] = state
        return idx

    def nearest(self, x: np.ndarray) -> Tuple[Optional[int], float]:
        n = len(self.witnesses)
        if n == 0:
            return None, np.inf
        diff = self._states[:n] - x
        d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        idx = int(np.argmin(d))
        return idx, float(d[idx])


def best_near_selection(
    tree: SearchTree,
    x_rand: np.ndarray,
    eps_bn: float,
    constraint: Optional[Callable[[np.ndarray], bool]] = None,
    distance: Optional[Callable] = None,
) -> Motion:
    """Lowest-cost active motion within eps_bn of x_rand; nearest as fallback.

    Ties break to the lowest motion id in both phases.
    """
    if constraint is None and distance is None:
        n = tree._next_id
        active = tree._active[:n]
        if not active.any():
            raise NoActiveVertex("tree has no active motion")
        d = tree._distances(x_rand)
        d[~active] = np.inf
        in_ball = d <= eps_bn
        if in_ball.any():
            costs = np.where(in_ball, tree._costs[:n], np.inf)
            return tree.motions[int(np.argmin(costs))]
        return tree.motions[int(np.argmin(d))]
    dist = distance or euclidean
    best_ball: Tuple[float, int] = (np.inf, -1)
    best_near: Tuple[float, int] = (np.inf, -1)
    for mid in sorted(tree.motions):
        m = tree.motions[mid]
        if m.inactive:
            continue
        if constraint is not None and not constraint(m.state):
            continue
        d = dist(m.state, x_rand)
        if d <= eps_bn and m.acc_cost < best_ball[0]:
            best_ball = (m.acc_cost, mid)
        if d < best_near[0]:
            best_near = (d, mid)
    if best_ball[1] >= 0:
        return tree.motions[best_ball[1]]
    if best_near[1] >= 0:
        return tree.motions[best_near[1]]
    raise NoActiveVertex("no active motion satisfies the constraint")


def is_vertex_locally_the_best(
    x: np.ndarray, cost: float, S: WitnessSet, eps_s: float, tree: SearchTree
) -> Tuple[bool, int]:
    """Locality test against the witness set.

    Creates a new (rep-less) witness when x opens a fresh region; otherwise
    admits x only if it strictly beats the incumbent representative's cost
    (ties keep the incumbent).
    """
    idx, d = S.nearest(x)
    if idx is None or d > eps_s:
        return True, S.add(x)
    w = S.witnesses[idx]
    if w.rep is None:
        return True, idx
    return cost < tree.motions[w.rep].acc_cost, idx


def prune_dominated_vertices(
    v_new: Motion,
    witness: Witness,
    tree: SearchTree,
    pinned: set,
):
    """Install v_new as the witness representative and prune the displaced one.

    The old representative is marked inactive; inactive leaves are deleted
    iteratively up the tree.  Internal inactive vertices stay for path
    continuity; roots and pinned (solution) vertices are never removed.
    """
    old_id = witness.rep
    witness.rep = v_new.id
    if old_id is None or old_id == v_new.id:
        return
    old = tree.motions.get(old_id)
    if old is None or old_id in pinned:
        return
    tree.set_inactive(old)
    cur = old
    while (
        cur.inactive
        and cur.num_children == 0
        and cur.parent is not None
        and cur.id not in pinned
    ):
        parent = tree.motions[cur.parent]
        tree.delete(cur)
        parent.num_children -= 1
        cur = parent


def hysst_solve(
    problem: PlannerProblem,
    params: HysstParams,
    rng: RngStream,
    instrument=None,
) -> PlannerResult:
    """Run the HySST main loop, collecting up to batch_size goal solutions.

    Returns the lowest-cost collected solution's extracted path; raises
    NoPlanFound when K is exhausted with no solution.  ``instrument`` may
    define after_iteration(tree, S, k) and on_admit(v_new, displaced_cost)
    hooks for invariant checking in tests.
    """
    t_start = _time.perf_counter()
    sys = problem.system
    tree = init_tree(problem.X0, sys.state_bounds, sys.input_dim)
    S = WitnessSet(sys.state_dim)
    stats = SolveStats()
    pinned: set = set()
    solutions: List[Tuple[float, int]] = []

    for rid in tree.roots:
        root = tree.motions[rid]
        ok, widx = is_vertex_locally_the_best(root.state, 0.0, S, params.eps_s, tree)
        if ok:
            prune_dominated_vertices(root, S.witnesses[widx], tree, pinned)
        if problem.goal(root.state, root.time):
            pinned.add(rid)
            solutions.append((0.0, rid))

    def finish() -> PlannerResult:
        stats.vertex_count = len(tree)
        stats.witness_count = len(S)
        stats.solution_count = len(solutions)
        stats.wall_time_ms = (_time.perf_counter() - t_start) * 1e3
        if not solutions:
            raise NoPlanFound(f"no plan after {stats.iterations} iterations", stats=stats)
        best_cost, best_id = min(solutions)
        motion = tree.motions[best_id]
        return PlannerResult(
            extract_path(tree, motion),
            best_cost,
            stats,
            motion,
            path_edges(tree, motion),
        )

    if len(solutions) >= params.batch_size:
        return finish()

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
        constraint = (
            problem.constraint_flow if flag == "flow" else problem.constraint_jump
        )
        try:
            v_cur = best_near_selection(
                tree, x_rand, params.eps_bn, constraint, problem.distance
            )
        except NoActiveVertex:
            continue
        result = new_state(v_cur, sys, params.flow, rng)
        if result is None:
            if instrument is not None and hasattr(instrument, "after_iteration"):
                instrument.after_iteration(tree, S, k)
            continue
        x_new, edge, u = result
        # Prefer ending the edge at its first goal sample, but only when
        # that shorter vertex passes the locality gate; otherwise keep the
        # full edge so the tree still grows through the goal region.
        goal_edge = truncate_at_goal(edge, problem.goal)
        if goal_edge is not edge:
            cost_goal = v_cur.acc_cost + params.cost_functional(goal_edge)
            ok, widx = is_vertex_locally_the_best(
                goal_edge.last.state, cost_goal, S, params.eps_s, tree
            )
            if ok:
                edge = goal_edge
                x_new = edge.last.state
                cost_new = cost_goal
            else:
                cost_new = v_cur.acc_cost + params.cost_functional(edge)
                ok, widx = is_vertex_locally_the_best(
                    x_new, cost_new, S, params.eps_s, tree
                )
        else:
            cost_new = v_cur.acc_cost + params.cost_functional(edge)
            ok, widx = is_vertex_locally_the_best(x_new, cost_new, S, params.eps_s, tree)
        if ok:
            witness = S.witnesses[widx]
            if instrument is not None and hasattr(instrument, "on_admit"):
                displaced = (
                    tree.motions[witness.rep].acc_cost
                    if witness.rep is not None
                    else None
                )
                instrument.on_admit(cost_new, displaced)
            v_new = tree.add_vertex(x_new, edge.last.time, cost_new)
            tree.add_edge(v_cur, v_new, edge, u)
            prune_dominated_vertices(v_new, witness, tree, pinned)
            if problem.goal(v_new.state, v_new.time):
                pinned.add(v_new.id)
                solutions.append((cost_new, v_new.id))
                if len(solutions) >= params.batch_size:
                    if instrument is not None and hasattr(instrument, "after_iteration"):
                        instrument.after_iteration(tree, S, k)
                    return finish()
        if instrument is not None and hasattr(instrument, "after_iteration"):
            instrument.after_iteration(tree, S, k)
    return finish()
