import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyplan import (
    HybridTime,
    RngStream,
    Sample,
    SolutionPair,
    extract_path,
    init_tree,
    nearest_neighbor,
    random_input,
    random_state,
)
from hyplan.errors import (
    EmptyInitialSet,
    EndpointMismatch,
    NoQualifyingVertex,
    SamplingExhausted,
)
from hyplan.tree import SearchTree, euclidean, path_edges


def build_tree(states, input_dim=1):
    tree = SearchTree(len(states[0]), input_dim)
    for s in states:
        tree.add_vertex(np.asarray(s, dtype=float), HybridTime(0.0, 0))
    return tree


def flow_edge(a, b, t0=0.0, dt=0.1):
    u = np.zeros(1)
    return SolutionPair(
        (
            Sample(HybridTime(t0, 0), np.asarray(a, dtype=float), u),
            Sample(HybridTime(t0 + dt, 0), np.asarray(b, dtype=float), u),
        )
    )


class TestSearchTree:
    def test_add_edge_exact_endpoint_check(self):
        tree = build_tree([[0.0], [1.0]])
        a, b = tree.motions[0], tree.motions[1]
        with pytest.raises(EndpointMismatch):
            tree.add_edge(a, b, flow_edge([0.0], [1.0 + 1e-12]), np.zeros(1))
        tree.add_edge(a, b, flow_edge([0.0], [1.0]), np.zeros(1))
        assert a.num_children == 1 and b.parent == 0

    def test_nearest_lowest_id_tie_break(self):
        tree = build_tree([[1.0], [-1.0], [1.0]])
        assert tree.nearest(np.array([0.0])).id == 0

    def test_nearest_skips_inactive_and_deleted(self):
        tree = build_tree([[0.0], [1.0], [2.0]])
        tree.set_inactive(tree.motions[0])
        tree.delete(tree.motions[1])
        assert tree.nearest(np.array([0.0])).id == 2
        tree.set_inactive(tree.motions[2])
        with pytest.raises(NoQualifyingVertex):
            tree.nearest(np.array([0.0]))

    def test_constrained_nearest(self):
        tree = build_tree([[0.0], [1.0], [2.0]])
        m = tree.nearest(np.array([0.1]), constraint=lambda x: x[0] > 0.5)
        assert m.id == 1
        with pytest.raises(NoQualifyingVertex):
            tree.nearest(np.array([0.0]), constraint=lambda x: x[0] > 5.0)

    def test_custom_distance(self):
        tree = build_tree([[0.0, 0.0], [3.0, 0.1]])
        # Weight the second coordinate heavily; the far-in-x vertex wins.
        dist = lambda a, b: abs(a[1] - b[1]) * 100 + abs(a[0] - b[0])
        assert tree.nearest(np.array([5.0, 0.1]), distance=dist).id == 1

    def test_growth_past_initial_capacity(self):
        tree = SearchTree(1, 1)
        for i in range(200):
            tree.add_vertex(np.array([float(i)]), HybridTime(0.0, 0))
        assert tree.nearest(np.array([150.2])).id == 150

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_nearest_matches_exhaustive_scan(self, seed):
        gen = np.random.Generator(np.random.Philox(seed))
        states = gen.uniform(-5, 5, size=(40, 3))
        tree = build_tree(states)
        for _ in range(10):
            q = gen.uniform(-6, 6, size=3)
            expect = min(
                tree.motions, key=lambda mid: (euclidean(tree.motions[mid].state, q), mid)
            )
            assert tree.nearest(q).id == expect


class TestInitTree:
    def test_roots_at_time_zero(self):
        tree = init_tree([[1.0, 0.0], [2.0, 0.0]], ((0.0, 2.0), (-8.0, 8.0)), 1)
        assert tree.roots == [0, 1]
        assert all(tree.motions[r].time == HybridTime(0.0, 0) for r in tree.roots)

    def test_empty_x0_rejected(self):
        with pytest.raises(EmptyInitialSet):
            init_tree([], ((0.0, 1.0),), 1)

    def test_out_of_bounds_root_rejected(self):
        with pytest.raises(ValueError):
            init_tree([[3.0, 0.0]], ((0.0, 2.0), (-8.0, 8.0)), 1)


class TestRandomSampling:
    def test_rejection_sampling_lands_in_region(self):
        rng = RngStream(3)
        x = random_state(lambda s: s[0] > 0.5, ((0.0, 1.0),), rng)
        assert x[0] > 0.5

    def test_fallback_sampler_used(self):
        rng = RngStream(3)
        x = random_state(
            lambda s: False,
            ((0.0, 1.0),),
            rng,
            max_attempts=5,
            fallback_sampler=lambda r: np.array([42.0]),
        )
        assert x[0] == 42.0

    def test_exhaustion_raises(self):
        with pytest.raises(SamplingExhausted):
            random_state(lambda s: False, ((0.0, 1.0),), RngStream(3), max_attempts=5)

    def test_random_input_within_bounds(self):
        rng = RngStream(5)
        for _ in range(50):
            u = random_input(((-4.0, 4.0), (0.0, 0.0)), rng)
            assert -4.0 <= u[0] <= 4.0
            assert u[1] == 0.0


class TestExtractPath:
    def test_root_only(self):
        tree = init_tree([[1.0]], ((0.0, 2.0),), 1)
        path = extract_path(tree, tree.motions[0])
        assert len(path.samples) == 1
        assert path.first.input.shape == (1,)

    def test_chain(self):
        tree = init_tree([[0.0]], ((0.0, 10.0),), 1)
        a = tree.motions[0]
        b = tree.add_vertex(np.array([1.0]), HybridTime(0.1, 0))
        tree.add_edge(a, b, flow_edge([0.0], [1.0]), np.zeros(1))
        c = tree.add_vertex(np.array([2.0]), HybridTime(0.2, 0))
        tree.add_edge(b, c, flow_edge([1.0], [2.0], t0=0.1), np.zeros(1))
        path = extract_path(tree, c)
        assert [s.state[0] for s in path.samples] == [0.0, 1.0, 2.0]
        assert path.last.time == HybridTime(0.2, 0)
        assert len(path_edges(tree, c)) == 2
        assert path_edges(tree, a) == []


class TestRngStream:
    def test_determinism(self):
        a, b = RngStream(11), RngStream(11)
        assert [a.random() for _ in range(10)] == [b.random() for _ in range(10)]

    def test_uniform_degenerate_bound(self):
        assert RngStream(0).uniform(3.0, 3.0) == 3.0

    def test_uniform_box_shape_and_bounds(self):
        rng = RngStream(2)
        for _ in range(20):
            v = rng.uniform_box(((0.0, 1.0), (-2.0, -1.0), (5.0, 5.0)))
            assert v.shape == (3,)
            assert 0.0 <= v[0] <= 1.0 and -2.0 <= v[1] <= -1.0 and v[2] == 5.0

    def test_choice_index_range(self):
        rng = RngStream(4)
        draws = {rng.choice_index(3) for _ in range(100)}
        assert draws == {0, 1, 2}
