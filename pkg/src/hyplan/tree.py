"""Search tree storage, sampling helpers, nearest-vertex queries, path extraction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .core import HybridTime, Sample, SolutionPair, concatenate
from .errors import (
    EmptyInitialSet,
    EndpointMismatch,
    NoQualifyingVertex,
    SamplingExhausted,
)
from .rng import RngStream


@dataclass
class Motion:
    """A tree vertex: its state, hybrid time, and the edge from its parent.

    num_children / inactive / acc_cost are only meaningful under HySST.
    """

    id: int
    state: np.ndarray
    time: HybridTime
    parent: Optional[int] = None
    edge: Optional[SolutionPair] = None
    input: Optional[np.ndarray] = None
    acc_cost: float = 0.0
    num_children: int = 0
    inactive: bool = False


def euclidean(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b))


class SearchTree:
    """Id-indexed motion store with a vectorized scan buffer.

    The buffer keeps one row per allocated id; deleted rows are filled
    with +inf so they can never win an argmin.  Ids are assigned in
    insertion order, so numpy's first-minimum argmin implements the
    documented lowest-id tie-break.
    """

    def __init__(self, state_dim: int, input_dim: int):
        self.state_dim = state_dim
        self.input_dim = input_dim
        self.motions: dict[int, Motion] = {}
        self.roots: List[int] = []
        self._cap = 64
        self._states = np.full((self._cap, state_dim), np.inf)
        self._costs = np.full(self._cap, np.inf)
        self._active = np.zeros(self._cap, dtype=bool)
        self._next_id = 0

    def __len__(self) -> int:
        return len(self.motions)

    def _grow(self):
        new_cap = self._cap * 2
        for name in ("_states", "_costs", "_active"):
            old = getattr(self, name)
            shape = (new_cap,) + old.shape[1:]
            fresh = np.full(shape, np.inf) if old.dtype == float else np.zeros(shape, dtype=bool)
            fresh[: self._cap] = old
            setattr(self, name, fresh)
        self._cap = new_cap

    def add_vertex(
        self,
        state: np.ndarray,
        time: HybridTime,
        cost: float = 0.0,
        *,
        is_root: bool = False,
    ) -> Motion:
        if self._next_id >= self._cap:
            self._grow()
        mid = self._next_id
        self._next_id += 1
        m = Motion(mid, np.asarray(state, dtype=float), time, acc_cost=cost)
        self.motions[mid] = m
        self._states[mid] = m.state
        self._costs[mid] = cost
        self._active[mid] = True
        if is_root:
            self.roots.append(mid)
        return m

    def add_edge(
        self,
        v_cur: Motion,
        v_new: Motion,
        edge: SolutionPair,
        input_value: np.ndarray,
    ):
        if v_cur.id not in self.motions:
            raise NoQualifyingVertex(f"parent id {v_cur.id} not in tree")
        if not np.array_equal(edge.last.state, v_new.state):
            raise EndpointMismatch("edge terminal state does not equal the new vertex state")
        v_new.parent = v_cur.id
        v_new.edge = edge
        v_new.input = np.asarray(input_value, dtype=float)
        v_cur.num_children += 1

    def set_inactive(self, motion: Motion):
        motion.inactive = True
        self._active[motion.id] = False

    def delete(self, motion: Motion):
        del self.motions[motion.id]
        self._states[motion.id] = np.inf
        self._costs[motion.id] = np.inf
        self._active[motion.id] = False

    # query helpers -----------------------------------------------------

    def _distances(self, x: np.ndarray) -> np.ndarray:
        n = self._next_id
        diff = self._states[:n] - x
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def active_ids(self):
        n = self._next_id
        return np.nonzero(self._active[:n])[0]

    def nearest(
        self,
        x: np.ndarray,
        constraint: Optional[Callable[[np.ndarray], bool]] = None,
        distance: Optional[Callable] = None,
    ) -> Motion:
        """Exact argmin over active motions; ties broken by lowest id."""
        if distance is None and constraint is None:
            n = self._next_id
            if n == 0 or not self._active[:n].any():
                raise NoQualifyingVertex("tree has no active motion")
            d = self._distances(x)
            d[~self._active[:n]] = np.inf
            best = int(np.argmin(d))
            if not np.isfinite(d[best]):
                raise NoQualifyingVertex("tree has no active motion")
            return self.motions[best]
        dist = distance or euclidean
        best_id, best_d = None, np.inf
        for mid in sorted(self.motions):
            m = self.motions[mid]
            if m.inactive:
                continue
            if constraint is not None and not constraint(m.state):
                continue
            d = dist(m.state, x)
            if d < best_d:
                best_id, best_d = mid, d
        if best_id is None:
            raise NoQualifyingVertex("no active motion satisfies the constraint")
        return self.motions[best_id]


def init_tree(X0_samples, state_bounds, input_dim: int) -> SearchTree:
    """Build a tree with one root per initial state, all at hybrid time (0, 0)."""
    X0_samples = [np.asarray(x, dtype=float) for x in X0_samples]
    if not X0_samples:
        raise EmptyInitialSet("X0 must contain at least one state")
    state_dim = X0_samples[0].size
    for x in X0_samples:
        for v, (lo, hi) in zip(x, state_bounds):
            if not (lo <= v <= hi):
                raise ValueError(f"initial state {x} outside state bounds")
    tree = SearchTree(state_dim, input_dim)
    for x in X0_samples:
        tree.add_vertex(x, HybridTime(0.0, 0), 0.0, is_root=True)
    return tree


def random_state(
    region: Callable[[np.ndarray], bool],
    bounds,
    rng: RngStream,
    max_attempts: int = 100,
    fallback_sampler: Optional[Callable[[RngStream], np.ndarray]] = None,
) -> np.ndarray:
    """Uniform rejection sampling of the bounds box until region(x) holds.

    Falls back to the supplied sampler (for measure-zero regions) once the
    attempt budget is exhausted.
    """
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    for _ in range(max_attempts):
        x = rng.uniform_box(bounds)
        if region(x):
            return x
    if fallback_sampler is not None:
        return np.asarray(fallback_sampler(rng), dtype=float)
    raise SamplingExhausted(
        f"no sample satisfied the region predicate in {max_attempts} attempts"
    )


def random_input(bounds, rng: RngStream) -> np.ndarray:
    """Uniform draw per input dimension."""
    return rng.uniform_box(bounds)


def nearest_neighbor(
    tree: SearchTree,
    x: np.ndarray,
    constraint: Optional[Callable[[np.ndarray], bool]] = None,
    distance: Optional[Callable] = None,
) -> Motion:
    return tree.nearest(np.asarray(x, dtype=float), constraint, distance)


def path_edges(tree: SearchTree, v: Motion):
    """Edges along the root -> v chain, in root-first order."""
    edges = []
    cur: Optional[Motion] = v
    while cur is not None and cur.parent is not None:
        edges.append(cur.edge)
        cur = tree.motions[cur.parent]
    edges.reverse()
    return edges


def extract_path(tree: SearchTree, v: Motion) -> SolutionPair:
    """Concatenate the edges from v's root down to v.

    For a root this is a single-sample pair at the root's hybrid time with
    a zero input.
    """
    chain = []
    cur: Optional[Motion] = v
    while cur is not None:
        chain.append(cur)
        cur = tree.motions[cur.parent] if cur.parent is not None else None
    chain.reverse()
    root = chain[0]
    path = SolutionPair(
        (Sample(root.time, root.state, np.zeros(tree.input_dim)),)
    )
    for m in chain[1:]:
        path = concatenate(path, m.edge)
    return path


@dataclass
class PlannerProblem:
    """A motion planning problem: system, initial set, goal test, distance."""

    system: object  # HybridSystem
    X0: list
    goal: Callable[[np.ndarray, HybridTime], bool]
    distance: Optional[Callable] = None
    constraint_flow: Optional[Callable[[np.ndarray], bool]] = None
    constraint_jump: Optional[Callable[[np.ndarray], bool]] = None
    sample_max_attempts: int = 100

    def __post_init__(self):
        if not self.X0:
            raise EmptyInitialSet("X0 must be nonempty")
        self.X0 = [np.asarray(x, dtype=float) for x in self.X0]
