"""Hider-side strategy space: benefit functions, graph constructions, tree enumeration."""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import BadHeight, BadShape, TooLarge
from .graphs import Graph, from_edges

TREE_ENUM_LIMIT = 9  # n^(n-2) labeled trees; ~4.8M at n=9 is the ceiling we accept


@dataclass(frozen=True)
class BenefitFunction:
    """Non-increasing table of hiding benefits indexed by distance from the source."""

    values: tuple[Fraction, ...]
    kind: str = "table"

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise ValueError("benefits must be non-negative")
        if any(a < b for a, b in zip(self.values, self.values[1:])):
            raise ValueError("benefit table must be non-increasing")

    def __call__(self, distance: int) -> Fraction:
        if distance >= len(self.values):
            return self.values[-1]
        return self.values[distance]

    @staticmethod
    def step(cutoff: int, n: int) -> "BenefitFunction":
        vals = tuple(Fraction(1) if x <= cutoff else Fraction(0) for x in range(n))
        return BenefitFunction(vals, kind=f"step:{cutoff}")

    @staticmethod
    def geometric(rho, n: int) -> "BenefitFunction":
        # strings/Fractions keep 0.9 exact; a float literal would break tie detection
        ratio = Fraction(str(rho)) if isinstance(rho, float) else Fraction(rho)
        if not 0 < ratio <= 1:
            raise ValueError("ratio must be in (0, 1]")
        vals = tuple(ratio**x for x in range(n))
        return BenefitFunction(vals, kind=f"geometric:{ratio}")

    @staticmethod
    def constant(n: int) -> "BenefitFunction":
        return BenefitFunction(tuple(Fraction(1) for _ in range(n)), kind="constant")

    @staticmethod
    def from_json(doc: dict, n: int) -> "BenefitFunction":
        kind = doc["kind"]
        if kind == "step":
            return BenefitFunction.step(int(doc["d"]), n)
        if kind == "geometric":
            return BenefitFunction.geometric(doc["rho"], n)
        if kind == "table":
            return BenefitFunction(tuple(Fraction(str(v)) for v in doc["values"]))
        raise ValueError(f"unknown benefit kind {kind!r}")

    @staticmethod
    def from_spec(spec: str, n: int) -> "BenefitFunction":
        """Parse compact CLI notation: ``step:3``, ``geometric:0.9``, ``constant``."""
        if spec == "constant":
            return BenefitFunction.constant(n)
        kind, _, arg = spec.partition(":")
        if kind == "step":
            return BenefitFunction.step(int(arg), n)
        if kind == "geometric":
            return BenefitFunction.geometric(arg, n)
        raise ValueError(f"unknown benefit spec {spec!r}")


@dataclass(frozen=True)
class HiderStrategy:
    """Probability distribution over (graph, hiding node) pairs."""

    atoms: tuple[tuple[Graph, int, Fraction], ...]

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("strategy needs at least one atom")
        total = sum(p for _, _, p in self.atoms)
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        for g, h, p in self.atoms:
            if p <= 0:
                raise ValueError("atom probabilities must be positive")
            if not 0 <= h < g.n:
                raise ValueError(f"hiding node {h} outside graph")

    @staticmethod
    def pure(g: Graph, h: int) -> "HiderStrategy":
        return HiderStrategy(((g, h, Fraction(1)),))


def palm_tree(n: int, d: int) -> Graph:
    """Trunk of ``d`` nodes from the source ending in a star over the rest."""
    if not 1 <= d <= n - 1:
        raise BadHeight(f"height {d} invalid for {n} nodes")
    edges = [(i, i + 1) for i in range(d - 1)]
    edges += [(d - 1, v) for v in range(d, n)]
    return from_edges(n, edges)


def crown_nodes(n: int, d: int) -> range:
    return range(d, n)


def palm_crown_mixed(n: int, d: int) -> HiderStrategy:
    """Uniform hiding over the crown of a single palm tree."""
    g = palm_tree(n, d)
    p = Fraction(1, n - d)
    return HiderStrategy(tuple((g, h, p) for h in crown_nodes(n, d)))


def optimal_hiding_depths(benefit: BenefitFunction, n: int) -> frozenset[int]:
    """Depths maximizing benefit(d) * (n + d - 1) / 2, ties kept exactly."""
    if n < 2:
        raise ValueError("need at least two nodes")
    scores = {d: benefit(d) * Fraction(n + d - 1, 2) for d in range(n)}
    best = max(scores.values())
    return frozenset(d for d, v in scores.items() if v == best)


def example1_graph(n: int, d: int) -> tuple[Graph, int]:
    """A line of ``d+1`` nodes from the source plus a decoy cycle through the source.

    Nodes ``1..d`` form the tail (target at ``d``); nodes ``d+1..n-1`` close a
    cycle of ``n-d`` nodes with the source.  Uses exactly ``n`` edges.
    """
    if d < 1:
        raise BadShape("tail must have positive length")
    if n - d < 3:
        raise BadShape(f"cycle needs at least 3 nodes, got {n - d}")
    edges = [(i, i + 1) for i in range(d)]
    ring = [0] + list(range(d + 1, n))
    edges += [(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]
    return from_edges(n, edges), d


def example2_graph(n: int, d: int) -> tuple[Graph, int]:
    """Tail plus a cycle of ``2d-2`` nodes through the source, with pendants
    hung on the cycle node opposite the source so each is reachable by two
    paths of length exactly ``d``.
    """
    if d < 3:
        raise BadShape("need d >= 3 so the cycle has at least 4 nodes")
    if n < 3 * d - 1:
        raise BadShape(f"need n >= 3d-1 = {3 * d - 1} for at least one pendant")
    edges = [(i, i + 1) for i in range(d)]          # tail 0-1-...-d
    ring = [0] + list(range(d + 1, 3 * d - 2))       # source + 2d-3 cycle nodes
    edges += [(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]
    antipode = ring[d - 1]
    pendants = range(3 * d - 2, n)
    edges += [(antipode, v) for v in pendants]
    g = from_edges(n, edges)
    if g.edge_count != n:
        raise BadShape(f"construction produced {g.edge_count} edges, expected {n}")
    return g, d


def prufer_decode(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    """Edges of the labeled tree encoded by a Prufer sequence of length n-2."""
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    edges.append((u, w))
    return edges


def all_trees(n: int) -> Iterator[Graph]:
    """Every labeled tree on ``n`` nodes (Cayley: n^(n-2) of them), source 0."""
    if n < 2:
        raise TooLarge("tree enumeration needs n >= 2")
    if n > TREE_ENUM_LIMIT:
        raise TooLarge(f"tree enumeration capped at n = {TREE_ENUM_LIMIT}")
    if n == 2:
        yield from_edges(2, [(0, 1)])
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield from_edges(n, prufer_decode(seq, n))
