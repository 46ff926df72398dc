import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hideseek.errors import EmptyFrontier, PolicyViolation
from hideseek.graphs import bfs_distances, closed_subgraph, from_edges
from hideseek.hider import example1_graph, palm_tree, prufer_decode
from hideseek.seeker import (
    AdjustedDFSPolicy,
    BoundedDFSPolicy,
    DFSPolicy,
    LabelOrderPolicy,
    MixturePolicy,
    SeekerPolicy,
    adfs_next,
    battery_policies,
    dfs_d_next,
    dfs_next,
    execute,
    observe,
    policy_from_id,
    sigma_star,
)


def line(n):
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


class TestObservation:
    def test_view_is_closed_subgraph(self):
        g, _ = example1_graph(10, 3)
        obs = observe(g, [0, 1])
        assert obs.view == closed_subgraph(g, [0, 1])
        assert obs.frontier == {2, 4, 9}

    def test_executed_views_match_reconstruction(self):
        g, _ = example1_graph(10, 3)
        rng = random.Random(11)
        episode = execute(DFSPolicy(), g, rng)
        for k in range(1, g.n):
            prefix = episode.sequence[:k]
            obs = observe(g, prefix)
            nodes = set(prefix)
            for u, v in g.edges:
                if u in set(prefix) or v in set(prefix):
                    nodes.update((u, v))
            assert obs.view.nodes == frozenset(nodes)
            assert obs.view.edges == frozenset(
                e for e in g.edges if e[0] in set(prefix) or e[1] in set(prefix)
            )


class TestDFS:
    def test_star_uniform(self):
        g = palm_tree(4, 1)
        dist = dfs_next(observe(g, [0]))
        assert dist == ((1, Fraction(1, 3)), (2, Fraction(1, 3)), (3, Fraction(1, 3)))

    def test_line_forced(self):
        g = line(4)
        assert dfs_next(observe(g, [0, 1])) == ((2, Fraction(1)),)

    def test_palm_after_trunk(self):
        g = palm_tree(10, 3)
        dist = dfs_next(observe(g, [0, 1, 2]))
        assert len(dist) == 7 and all(p == Fraction(1, 7) for _, p in dist)

    def test_empty_frontier(self):
        g = line(3)
        with pytest.raises(EmptyFrontier):
            dfs_next(observe(g, [0, 1, 2]))


class TestBoundedDFS:
    def test_matches_dfs_on_tree_within_bound(self):
        g = palm_tree(7, 2)
        for prefix in ([0], [0, 1], [0, 1, 3], [0, 1, 3, 2]):
            obs = observe(g, prefix)
            assert dfs_d_next(obs, 2) == dfs_next(obs)

    def test_bound_n_equals_dfs_on_cycle_instance(self):
        g, _ = example1_graph(10, 3)
        rng = random.Random(5)
        episode = execute(DFSPolicy(), g, rng)
        for k in range(1, g.n):
            obs = observe(g, episode.sequence[:k])
            assert dfs_d_next(obs, g.n) == dfs_next(obs)

    def test_defers_beyond_bound(self):
        # after the tail is exhausted the ring is explored; nodes whose view
        # distance exceeds the bound are only taken when nothing near remains
        g, t = example1_graph(10, 3)
        obs = observe(g, [0, 1, 2, 3])
        dist = dict(dfs_d_next(obs, 3))
        assert set(dist) == {4, 9}

    def test_far_neighbors_unpreferred(self):
        # visited deep down one ring arm: the frontier node beyond reach is
        # skipped in favour of the near side
        g, _ = example1_graph(10, 3)
        obs = observe(g, [0, 4, 5, 6])
        dist = dict(dfs_d_next(obs, 3))
        assert 7 not in dist  # view distance 4 > 3
        assert set(dist) <= {1, 9}


class TestAdjustedDFS:
    def test_matches_dfs_on_trees(self):
        g = palm_tree(7, 3)
        for prefix in ([0], [0, 1], [0, 1, 2], [0, 1, 2, 5]):
            obs = observe(g, prefix)
            assert adfs_next(obs) == dfs_next(obs)

    def test_prioritizes_single_path_after_cycle(self):
        # stalk 0-1 into ring 2-3-4-5(-2), pendant 6 at the entrance, 7 behind
        g = from_edges(8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 2), (2, 6), (4, 7)])
        obs = observe(g, (0, 1, 2, 3, 4, 5))
        # hand trace: the ring is closed; 6 is reachable by one path through
        # the entrance while 7 has two paths, so the gate side is drained first
        assert adfs_next(obs) == ((6, Fraction(1)),)
        assert dfs_next(obs) == ((7, Fraction(1)),)

    def test_example1_tail_prioritized_after_cycle(self):
        g, t = example1_graph(7, 2)
        obs = observe(g, (0, 3, 4, 5, 6))
        assert adfs_next(obs) == ((1, Fraction(1)),)


class TestSigmaStar:
    def test_weights(self):
        mix = sigma_star(3)
        assert sum(w for w, _ in mix.components) == 1
        assert [w for w, _ in mix.components] == [Fraction(3, 8), Fraction(3, 8), Fraction(1, 4)]

    def test_strategy_mixture_has_no_pointwise_distribution(self):
        g = palm_tree(4, 1)
        with pytest.raises(PolicyViolation):
            sigma_star(2).distribution(observe(g, [0]))

    def test_pointwise_combination(self):
        g, _ = example1_graph(10, 3)
        obs = observe(g, (0, 1, 2, 3))
        mix = sigma_star(3, pointwise=True)
        combined = dict(mix.distribution(obs))
        parts = [
            (Fraction(3, 8), dict(dfs_next(obs))),
            (Fraction(3, 8), dict(adfs_next(obs))),
            (Fraction(1, 4), dict(dfs_d_next(obs, 3))),
        ]
        for v in combined:
            assert combined[v] == sum(w * part.get(v, Fraction(0)) for w, part in parts)

    def test_reduces_to_dfs_on_trees(self):
        g = palm_tree(6, 2)
        mix = sigma_star(5, pointwise=True)
        for prefix in ([0], [0, 1], [0, 1, 4]):
            obs = observe(g, prefix)
            assert mix.distribution(obs) == dfs_next(obs)


class _CountingRandom(random.Random):
    def __init__(self, seed):
        super().__init__(seed)
        self.calls = 0

    def random(self):
        self.calls += 1
        return super().random()


class TestExecute:
    def test_line_deterministic(self):
        g = line(4)
        for seed in range(5):
            assert execute(DFSPolicy(), g, random.Random(seed)).sequence == (0, 1, 2, 3)

    def test_permutation_and_draw_count(self):
        g, _ = example1_graph(10, 3)
        rng = _CountingRandom(3)
        episode = execute(DFSPolicy(), g, rng)
        assert sorted(episode.sequence) == list(range(10))
        assert rng.calls == g.n - 1

    def test_star_orders_equally_likely(self):
        g = palm_tree(4, 1)
        seen = {execute(DFSPolicy(), g, random.Random(s)).sequence for s in range(200)}
        assert seen == {(0,) + p for p in itertools.permutations((1, 2, 3))}

    def test_policy_violation_detected(self):
        class Rogue(SeekerPolicy):
            kind = "rogue"

            def distribution(self, obs):
                return ((obs.visited[0], Fraction(1)),)

        g = line(4)
        with pytest.raises(PolicyViolation):
            execute(Rogue(), g, random.Random(0))

    def test_mixture_runs_componentwise(self):
        g, _ = example1_graph(7, 2)
        episode = execute(sigma_star(2), g, random.Random(9))
        assert sorted(episode.sequence) == list(range(7))

    def test_bounded_visits_near_nodes_first_on_trees(self):
        g = palm_tree(8, 3)
        dist = bfs_distances(g, 0)
        for seed in range(20):
            episode = execute(BoundedDFSPolicy(2), g, random.Random(seed))
            seen_far = False
            for v in episode.sequence:
                if dist[v] > 2:
                    seen_far = True
                else:
                    assert not seen_far, episode


class TestPolicyRegistry:
    def test_ids(self):
        assert policy_from_id("dfs").kind == "dfs"
        assert policy_from_id("dfs_d", d=3).identifier == "dfs_d[3]"
        assert policy_from_id("adfs").kind == "adfs"
        assert isinstance(policy_from_id("sigma_star", d=2), MixturePolicy)
        with pytest.raises(ValueError):
            policy_from_id("dfs_d")
        with pytest.raises(ValueError):
            policy_from_id("nonsense")

    def test_battery_distinct(self):
        ids = [p.identifier for p in battery_policies(3)]
        assert len(ids) == len(set(ids)) == 7

    def test_label_order(self):
        g = palm_tree(4, 1)
        obs = observe(g, [0])
        assert LabelOrderPolicy(lowest=True).distribution(obs) == ((1, Fraction(1)),)
        assert LabelOrderPolicy(lowest=False).distribution(obs) == ((3, Fraction(1)),)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 7), st.data())
def test_distributions_are_proper(n, data):
    seq = data.draw(st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2))
    g = from_edges(n, prufer_decode(seq, n))
    episode = execute(DFSPolicy(), g, random.Random(data.draw(st.integers(0, 10_000))))
    k = data.draw(st.integers(1, n - 1))
    obs = observe(g, episode.sequence[:k])
    for policy in (DFSPolicy(), BoundedDFSPolicy(2), AdjustedDFSPolicy(), sigma_star(2, pointwise=True)):
        dist = policy.distribution(obs)
        assert sum(p for _, p in dist) == 1
        assert all(v in obs.frontier for v, _ in dist)
