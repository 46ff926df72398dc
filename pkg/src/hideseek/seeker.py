"""Seeker-side machinery: observations, search policies, and episode execution.

A policy only ever sees an :class:`Observation` -- the ordered list of visited
nodes plus the closed induced subgraph over them.  It never touches the full
hidden graph; the executor enforces that boundary by constructing the view.

Policies return exact rational distributions over the frontier.  The depth
first family differs only in how the *active* node (whose unvisited
neighbours are eligible) is selected:

* ``dfs``       -- most recently visited node with an unvisited neighbour.
* ``dfs_d``     -- visits everything within distance ``d`` first; once the
                   view shows a cycle, nodes whose second short path was just
                   revealed are drained in first-seen order before returning
                   to normal operation.
* ``adfs``      -- after the cycle closes, exhausts nodes reachable by a
                   single path (via the cycle entrance) before any node that
                   has two paths from the source.
* ``sigma_star``-- plays dfs / adfs / dfs_d for the whole episode with
                   probabilities 3/8, 3/8, 1/4.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Sequence

from .errors import EmptyFrontier, PolicyViolation
from .graphs import Graph, Subgraph, cached_profiles, closed_subgraph

Distribution = tuple[tuple[int, Fraction], ...]


@dataclass(frozen=True)
class Observation:
    """What the seeker knows: the visit order and its closed induced subgraph."""

    visited: tuple[int, ...]
    view: Subgraph

    @property
    def source(self) -> int:
        return self.visited[0]

    @cached_property
    def visited_set(self) -> frozenset[int]:
        return frozenset(self.visited)

    @cached_property
    def frontier(self) -> frozenset[int]:
        return self.view.nodes - self.visited_set

    def unvisited_neighbors(self, z: int) -> tuple[int, ...]:
        vs = self.visited_set
        return tuple(w for w in self.view.adj[z] if w not in vs)

    @cached_property
    def active_stack(self) -> tuple[int, ...]:
        """Visited nodes that still have unvisited neighbours, in visit order."""
        return tuple(z for z in self.visited if self.unvisited_neighbors(z))

    @cached_property
    def cycle_among_visited(self) -> bool:
        vs = self.visited_set
        inner = sum(1 for u, v in self.view.edges if u in vs and v in vs)
        return inner >= len(vs)


def observe(g: Graph, visited: Sequence[int]) -> Observation:
    return Observation(visited=tuple(visited), view=closed_subgraph(g, visited))


def _uniform(nodes) -> Distribution:
    nodes = sorted(nodes)
    if not nodes:
        raise EmptyFrontier("no eligible node to move to")
    p = Fraction(1, len(nodes))
    return tuple((v, p) for v in nodes)


class SeekerPolicy:
    """Base policy: a map from observations to frontier distributions."""

    kind: str = "abstract"

    @property
    def identifier(self) -> str:
        return self.kind

    def distribution(self, obs: Observation) -> Distribution:
        raise NotImplementedError

    def state_key(self, obs: Observation) -> Hashable | None:
        """Collapse of the visit sequence to what this policy actually reads.

        ``None`` disables memoized enumeration for the policy.
        """
        return None


class _RecencyPolicy(SeekerPolicy):
    """Shared collapse for policies that read the sequence only through the
    ordered stack of still-active nodes."""

    def state_key(self, obs: Observation) -> Hashable:
        return (obs.visited_set, obs.active_stack)


class DFSPolicy(_RecencyPolicy):
    kind = "dfs"

    def distribution(self, obs: Observation) -> Distribution:
        if not obs.frontier:
            raise EmptyFrontier("all nodes visited")
        active = obs.active_stack[-1]
        return _uniform(obs.unvisited_neighbors(active))


class BoundedDFSPolicy(_RecencyPolicy):
    """Depth-bounded randomized DFS with post-cycle-revision behaviour."""

    kind = "dfs_d"

    def __init__(self, d: int):
        if d < 0:
            raise ValueError("bound must be non-negative")
        self.d = d

    @property
    def identifier(self) -> str:
        return f"dfs_d[{self.d}]"

    def distribution(self, obs: Observation) -> Distribution:
        if not obs.frontier:
            raise EmptyFrontier("all nodes visited")
        prof = cached_profiles(obs.view, obs.source)
        sets = prof.bounded_sets(self.d)
        revealed_deep = sets.one_short & (sets.double - sets.two_near)
        revealed_now = sets.one_short & (sets.two_near - sets.two_short)
        stack = obs.active_stack

        if obs.cycle_among_visited and obs.frontier & revealed_deep:
            active = _last_with(obs, stack, revealed_deep)
        elif obs.cycle_among_visited and obs.frontier & revealed_now:
            active = _first_with(obs, stack, revealed_now)
        elif obs.frontier & sets.within:
            active = _last_with(obs, stack, sets.within)
        else:
            active = stack[-1]
        nbrs = obs.unvisited_neighbors(active)
        preferred = [w for w in nbrs if w in sets.within]
        return _uniform(preferred if preferred else nbrs)


class AdjustedDFSPolicy(_RecencyPolicy):
    """DFS that, once the cycle is known, clears single-path nodes first."""

    kind = "adfs"

    def distribution(self, obs: Observation) -> Distribution:
        if not obs.frontier:
            raise EmptyFrontier("all nodes visited")
        stack = obs.active_stack
        active = None
        if obs.cycle_among_visited:
            prof = cached_profiles(obs.view, obs.source)
            single = prof.single_path
            double = prof.double_path
            gate_single = prof.through_entrance - double
            if obs.frontier & gate_single:
                active = _last_with(obs, stack, single)
            elif obs.frontier & double:
                active = _last_with(obs, stack, double)
        if active is None:
            active = stack[-1]
        return _uniform(obs.unvisited_neighbors(active))


def _last_with(obs: Observation, stack, members) -> int:
    for z in reversed(stack):
        if any(w in members for w in obs.unvisited_neighbors(z)):
            return z
    raise EmptyFrontier("no stacked node borders the requested set")


def _first_with(obs: Observation, stack, members) -> int:
    for z in stack:
        if any(w in members for w in obs.unvisited_neighbors(z)):
            return z
    raise EmptyFrontier("no stacked node borders the requested set")


class LabelOrderPolicy(SeekerPolicy):
    """Deterministic battery policy: always take the lowest (or highest) label."""

    def __init__(self, lowest: bool = True):
        self.lowest = lowest
        self.kind = "lowest_label" if lowest else "highest_label"

    def distribution(self, obs: Observation) -> Distribution:
        if not obs.frontier:
            raise EmptyFrontier("all nodes visited")
        pick = min(obs.frontier) if self.lowest else max(obs.frontier)
        return ((pick, Fraction(1)),)

    def state_key(self, obs: Observation) -> Hashable:
        # reads only the visited set, not the order
        return (obs.visited_set,)


class BreadthPreferringPolicy(_RecencyPolicy):
    """Anti-DFS battery policy: the earliest visited node stays active."""

    kind = "breadth_first"

    def distribution(self, obs: Observation) -> Distribution:
        if not obs.frontier:
            raise EmptyFrontier("all nodes visited")
        active = obs.active_stack[0]
        return _uniform(obs.unvisited_neighbors(active))


class MixturePolicy(SeekerPolicy):
    """Upfront mixture: one component is drawn per episode and played throughout.

    ``pointwise=True`` switches to the per-step convex combination of the
    component distributions (exposed for comparison only; the exact analysis
    in :mod:`hideseek.analysis` covers the upfront form).
    """

    def __init__(self, components, kind: str, pointwise: bool = False):
        self.components: tuple[tuple[Fraction, SeekerPolicy], ...] = tuple(components)
        if sum(w for w, _ in self.components) != 1:
            raise ValueError("mixture weights must sum to 1")
        self.kind = kind
        self.pointwise = pointwise

    @property
    def identifier(self) -> str:
        inner = ",".join(f"{w}*{p.identifier}" for w, p in self.components)
        mode = "pointwise" if self.pointwise else "upfront"
        return f"{self.kind}[{mode}:{inner}]"

    def distribution(self, obs: Observation) -> Distribution:
        if not self.pointwise:
            raise PolicyViolation(
                "strategy-level mixture has no per-step distribution; "
                "execute/enumerate it componentwise or build with pointwise=True"
            )
        merged: dict[int, Fraction] = {}
        for w, policy in self.components:
            for v, p in policy.distribution(obs):
                merged[v] = merged.get(v, Fraction(0)) + w * p
        return tuple(sorted(merged.items()))

    def state_key(self, obs: Observation) -> Hashable | None:
        if not self.pointwise:
            return None
        keys = tuple(p.state_key(obs) for _, p in self.components)
        if any(k is None for k in keys):
            return None
        return keys


def sigma_star(d: int, pointwise: bool = False) -> MixturePolicy:
    """The 3/8 dfs + 3/8 adfs + 1/4 dfs_d seeker mixture."""
    if d < 1:
        raise ValueError("mixture needs a positive bound")
    components = (
        (Fraction(3, 8), DFSPolicy()),
        (Fraction(3, 8), AdjustedDFSPolicy()),
        (Fraction(1, 4), BoundedDFSPolicy(d)),
    )
    return MixturePolicy(components, kind="sigma_star", pointwise=pointwise)


def dfs_next(obs: Observation) -> Distribution:
    return DFSPolicy().distribution(obs)


def dfs_d_next(obs: Observation, d: int) -> Distribution:
    return BoundedDFSPolicy(d).distribution(obs)


def adfs_next(obs: Observation) -> Distribution:
    return AdjustedDFSPolicy().distribution(obs)


def policy_from_id(kind: str, d: int | None = None, pointwise: bool = False) -> SeekerPolicy:
    """Resolve a CLI/config policy identifier."""
    if kind == "dfs":
        return DFSPolicy()
    if kind == "adfs":
        return AdjustedDFSPolicy()
    if kind == "dfs_d":
        if d is None:
            raise ValueError("dfs_d needs a bound d")
        return BoundedDFSPolicy(d)
    if kind == "sigma_star":
        if d is None:
            raise ValueError("sigma_star needs a bound d")
        return sigma_star(d, pointwise=pointwise)
    if kind == "lowest_label":
        return LabelOrderPolicy(lowest=True)
    if kind == "highest_label":
        return LabelOrderPolicy(lowest=False)
    if kind == "breadth_first":
        return BreadthPreferringPolicy()
    raise ValueError(f"unknown policy id {kind!r}")


def battery_policies(d: int) -> list[SeekerPolicy]:
    """The policy battery used for strategy-invariance checks."""
    return [
        DFSPolicy(),
        BoundedDFSPolicy(d),
        AdjustedDFSPolicy(),
        sigma_star(d),
        LabelOrderPolicy(lowest=True),
        LabelOrderPolicy(lowest=False),
        BreadthPreferringPolicy(),
    ]


@dataclass(frozen=True)
class Episode:
    """A complete seeking sequence (a permutation of the nodes, source first)."""

    sequence: tuple[int, ...]

    def pos(self, h: int) -> int:
        return self.sequence.index(h)


def draw(dist: Distribution, rng: random.Random) -> int:
    r = rng.random()
    acc = 0.0
    for v, p in dist:
        acc += p.numerator / p.denominator
        if r < acc:
            return v
    return dist[-1][0]


class ExecutionCache:
    """Cross-episode memo for repeated sampling on one graph.

    Views depend only on the visited set.  Distributions are cached twice per
    policy: under the exact visit prefix (cheap lookup on hot paths) and under
    the policy's collapsed state (merges prefixes the policy cannot tell
    apart).  Entries are exact either way.
    """

    __slots__ = ("views", "by_prefix", "by_state")

    _LIMIT = 1 << 18

    def __init__(self):
        self.views: dict[frozenset[int], Subgraph] = {}
        self.by_prefix: dict[str, dict[tuple[int, ...], Distribution]] = {}
        self.by_state: dict[str, dict] = {}

    def tables(self, policy_id: str) -> tuple[dict, dict]:
        return (
            self.by_prefix.setdefault(policy_id, {}),
            self.by_state.setdefault(policy_id, {}),
        )

    def trim(self) -> None:
        if len(self.views) > self._LIMIT:
            self.views.clear()
        for group in (self.by_prefix, self.by_state):
            for table in group.values():
                if len(table) > self._LIMIT:
                    table.clear()


def _pick_component(policy: MixturePolicy, rng: random.Random) -> SeekerPolicy:
    r = rng.random()
    acc = Fraction(0)
    for w, component in policy.components:
        acc += w
        if r < acc:
            return component
    return policy.components[-1][1]


def _walk(
    policy: SeekerPolicy,
    g: Graph,
    rng: random.Random,
    stop_at: int | None,
    cache: ExecutionCache | None,
) -> list[int]:
    if isinstance(policy, MixturePolicy) and not policy.pointwise:
        return _walk(_pick_component(policy, rng), g, rng, stop_at, cache)
    visited = [g.source]
    vset = {g.source}
    prefix_table = state_table = None
    if cache is not None:
        prefix_table, state_table = cache.tables(policy.identifier)
    while len(visited) < g.n:
        if visited[-1] == stop_at:
            break
        prefix = tuple(visited)
        dist = prefix_table.get(prefix) if prefix_table is not None else None
        if dist is None:
            fs = frozenset(vset)
            view = cache.views.get(fs) if cache is not None else None
            if view is None:
                view = closed_subgraph(g, visited)
                if cache is not None:
                    cache.views[fs] = view
            obs = Observation(visited=prefix, view=view)
            skey = policy.state_key(obs) if state_table is not None else None
            if skey is not None:
                dist = state_table.get(skey)
            if dist is None:
                dist = policy.distribution(obs)
                frontier = obs.frontier
                if any(w not in frontier for w, _ in dist):
                    raise PolicyViolation(
                        f"policy {policy.identifier} proposed a node off the frontier"
                    )
                if skey is not None:
                    state_table[skey] = dist
            if prefix_table is not None:
                prefix_table[prefix] = dist
        pick = draw(dist, rng)
        visited.append(pick)
        vset.add(pick)
    if cache is not None:
        cache.trim()
    return visited


def execute(
    policy: SeekerPolicy,
    g: Graph,
    rng: random.Random,
    cache: ExecutionCache | None = None,
) -> Episode:
    """Run a policy to completion; deterministic given the rng stream."""
    return Episode(tuple(_walk(policy, g, rng, None, cache)))


def sample_position(
    policy: SeekerPolicy,
    g: Graph,
    h: int,
    rng: random.Random,
    cache: ExecutionCache | None = None,
) -> int:
    """Position of ``h`` in one sampled episode, stopping once it is found.

    Consumes the same rng prefix as :func:`execute`, so the value matches the
    full episode's ``pos(h)`` exactly.
    """
    return _walk(policy, g, rng, h, cache).index(h)
