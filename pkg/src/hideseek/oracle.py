"""Ground-truth engines: exact enumeration of randomized policies.

Everything here walks the full decision tree of a policy with exact rational
arithmetic, so results are suitable as an independent oracle for the closed
forms in :mod:`hideseek.analysis`.

Enumeration is sequence-keyed by default (no state is ever merged).  Passing
``memoized=True`` collapses the visit sequence to the policy's declared
sufficient statistic (``SeekerPolicy.state_key``); the two modes are required
to agree and that equality is part of the test suite.  Upfront mixtures are
always enumerated componentwise and recombined by their weights.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .errors import TooLarge
from .graphs import Graph, bfs_distances, closed_subgraph
from .hider import BenefitFunction, HiderStrategy, all_trees
from .seeker import MixturePolicy, Observation, SeekerPolicy, battery_policies

DEFAULT_NODE_LIMIT = 12
_MISS = object()


def _guard(g: Graph, node_limit: int | None) -> None:
    if node_limit is not None and g.n > node_limit:
        raise TooLarge(f"enumeration guard: n = {g.n} exceeds {node_limit}")


class _Views:
    """Per-graph cache of closed subgraphs keyed by the visited set."""

    def __init__(self, g: Graph):
        self.g = g
        self._cache: dict[frozenset[int], object] = {}

    def observation(self, seq: tuple[int, ...]) -> Observation:
        key = frozenset(seq)
        view = self._cache.get(key)
        if view is None:
            view = closed_subgraph(self.g, seq)
            self._cache[key] = view
        return Observation(visited=seq, view=view)


def _components(policy: SeekerPolicy):
    if isinstance(policy, MixturePolicy) and not policy.pointwise:
        return policy.components
    return None


def exact_expected_pos(
    policy: SeekerPolicy,
    g: Graph,
    h: int,
    *,
    node_limit: int | None = DEFAULT_NODE_LIMIT,
    memoized: bool = False,
) -> Fraction:
    """Exact expected 0-based position of ``h`` in the induced seeking sequence."""
    _guard(g, node_limit)
    comps = _components(policy)
    if comps is not None:
        return sum(
            (w * exact_expected_pos(p, g, h, node_limit=node_limit, memoized=memoized)
             for w, p in comps),
            Fraction(0),
        )
    if h == g.source:
        return Fraction(0)
    views = _Views(g)
    memo: dict = {}

    def go(seq: tuple[int, ...]) -> Fraction:
        obs = views.observation(seq)
        key = policy.state_key(obs) if memoized else None
        if key is not None:
            hit = memo.get(key, _MISS)
            if hit is not _MISS:
                return hit
        k = len(seq)
        total = Fraction(0)
        for w, p in policy.distribution(obs):
            if w == h:
                total += p * k
            else:
                total += p * go(seq + (w,))
        if key is not None:
            memo[key] = total
        return total

    return go((g.source,))


def exact_visit_prob(
    policy: SeekerPolicy,
    g: Graph,
    v: int,
    t: int,
    *,
    node_limit: int | None = DEFAULT_NODE_LIMIT,
    memoized: bool = False,
) -> Fraction:
    """Exact probability that ``v`` is visited strictly before ``t``."""
    if v == t:
        raise ValueError("nodes must be distinct")
    _guard(g, node_limit)
    comps = _components(policy)
    if comps is not None:
        return sum(
            (w * exact_visit_prob(p, g, v, t, node_limit=node_limit, memoized=memoized)
             for w, p in comps),
            Fraction(0),
        )
    if v == g.source:
        return Fraction(1)
    if t == g.source:
        return Fraction(0)
    views = _Views(g)
    memo: dict = {}

    def go(seq: tuple[int, ...]) -> Fraction:
        obs = views.observation(seq)
        key = policy.state_key(obs) if memoized else None
        if key is not None:
            hit = memo.get(key, _MISS)
            if hit is not _MISS:
                return hit
        total = Fraction(0)
        for w, p in policy.distribution(obs):
            if w == v:
                total += p
            elif w != t:
                total += p * go(seq + (w,))
        if key is not None:
            memo[key] = total
        return total

    return go((g.source,))


def exact_position_table(
    policy: SeekerPolicy,
    g: Graph,
    *,
    node_limit: int | None = DEFAULT_NODE_LIMIT,
    memoized: bool = True,
) -> dict[int, Fraction]:
    """Expected position of every node, from one pass over the decision tree."""
    _guard(g, node_limit)
    comps = _components(policy)
    if comps is not None:
        merged = {v: Fraction(0) for v in g.node_set}
        for w, p in comps:
            part = exact_position_table(p, g, node_limit=node_limit, memoized=memoized)
            for v, val in part.items():
                merged[v] += w * val
        return merged
    views = _Views(g)
    memo: dict = {}
    full = g.node_set

    def go(seq: tuple[int, ...]) -> dict[int, Fraction]:
        # expected number of further steps until each unvisited node is reached
        if len(seq) == g.n:
            return {}
        obs = views.observation(seq)
        key = policy.state_key(obs) if memoized else None
        if key is not None:
            hit = memo.get(key, _MISS)
            if hit is not _MISS:
                return hit
        acc = dict.fromkeys(full - obs.visited_set, Fraction(1))
        for w, p in policy.distribution(obs):
            child = go(seq + (w,))
            for v, offset in child.items():
                acc[v] += p * offset
        if key is not None:
            memo[key] = acc
        return acc

    offsets = go((g.source,))
    table = {g.source: Fraction(0)}
    for v, offset in offsets.items():
        table[v] = offset  # offsets from a single visited node are absolute positions
    return table


def episode_distribution(
    policy: SeekerPolicy,
    g: Graph,
    *,
    node_limit: int | None = 8,
) -> dict[tuple[int, ...], Fraction]:
    """Full distribution over seeking sequences (small instances only)."""
    _guard(g, node_limit)
    comps = _components(policy)
    if comps is not None:
        merged: dict[tuple[int, ...], Fraction] = {}
        for w, p in comps:
            for seq, q in episode_distribution(p, g, node_limit=node_limit).items():
                merged[seq] = merged.get(seq, Fraction(0)) + w * q
        return merged
    views = _Views(g)
    out: dict[tuple[int, ...], Fraction] = {}

    def go(seq: tuple[int, ...], prob: Fraction) -> None:
        if len(seq) == g.n:
            out[seq] = out.get(seq, Fraction(0)) + prob
            return
        obs = views.observation(seq)
        for w, p in policy.distribution(obs):
            go(seq + (w,), prob * p)

    go((g.source,), Fraction(1))
    return out


_TABLE_CACHE: dict[tuple[Graph, str], dict[int, Fraction]] = {}


def cached_position_table(policy: SeekerPolicy, g: Graph) -> dict[int, Fraction]:
    key = (g, policy.identifier)
    hit = _TABLE_CACHE.get(key)
    if hit is None:
        hit = exact_position_table(policy, g, node_limit=None, memoized=True)
        _TABLE_CACHE[key] = hit
    return hit


def best_response_hider(
    n: int,
    benefit: BenefitFunction,
    policy: SeekerPolicy,
) -> tuple[Graph, int, Fraction]:
    """Exhaustive best response over all labeled trees and hiding nodes."""
    if n > 8:
        raise TooLarge("best-response search capped at n = 8")
    best: tuple[Graph, int, Fraction] | None = None
    for g in all_trees(n):
        table = cached_position_table(policy, g)
        dist = bfs_distances(g, g.source)
        for h in range(n):
            payoff = benefit(dist[h]) * table[h]
            if best is None or payoff > best[2]:
                best = (g, h, payoff)
    assert best is not None
    return best


def hider_value(policy: SeekerPolicy, strategy: HiderStrategy, *, node_limit: int | None = DEFAULT_NODE_LIMIT) -> Fraction:
    """Expected position of the hidden node under a mixed hiding strategy."""
    return sum(
        (p * exact_expected_pos(policy, g, h, node_limit=node_limit, memoized=True)
         for g, h, p in strategy.atoms),
        Fraction(0),
    )


def adversarial_policy_battery(
    g: Graph,
    strategy: HiderStrategy,
    d: int | None = None,
    *,
    node_limit: int | None = 10,
) -> list[tuple[str, Fraction]]:
    """Expected positions for the whole policy battery against a hiding strategy."""
    _guard(g, node_limit)
    if d is None:
        dist = bfs_distances(g, g.source)
        d = max(dist[h] for _, h, _ in strategy.atoms)
    results = []
    for policy in battery_policies(max(d, 1)):
        results.append((policy.identifier, hider_value(policy, strategy, node_limit=node_limit)))
    return results


def reachable_observations(policy: SeekerPolicy, g: Graph) -> Iterator[Observation]:
    """Every observation reachable with positive probability under ``policy``."""
    views = _Views(g)

    def go(seq: tuple[int, ...]) -> Iterator[Observation]:
        if len(seq) == g.n:
            return
        obs = views.observation(seq)
        yield obs
        for w, _ in policy.distribution(obs):
            yield from go(seq + (w,))

    yield from go((g.source,))
