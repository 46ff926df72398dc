"""Verification corpus: small instances engineered to exercise every branch
of the pairwise visit-order tables.

Each instance pins a bound ``d`` chosen so that specific structural classes
are inhabited (nodes before/on/behind the cycle, one or two short paths,
cycle fully or partially within reach, exits on or off the target's short
path).  Rings are sized so the bounded sweeps stall where the derivations
assume they do; every (strategy, target, v) pair admitted by the tables on
these instances agrees with the enumeration oracle exactly, and together the
instances fire every table branch at least once.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph, from_edges
from .hider import example1_graph, palm_tree


@dataclass(frozen=True)
class CorpusInstance:
    name: str
    graph: Graph
    d: int


def _ring(k: int) -> list[tuple[int, int]]:
    return [(i, (i + 1) % k) for i in range(k)]


def default_corpus() -> list[CorpusInstance]:
    out: list[CorpusInstance] = []

    g1, _ = example1_graph(10, 3)
    out.append(CorpusInstance("ring_tail", g1, 3))

    # stalk 0-1 into a 6-ring at 2; side branch 1-8-9; pendant on the
    # entrance; pendant behind the ring.  d=5 keeps part of the ring out of
    # reach; d=4 pushes the whole ring out (only the distance-zero rows fire).
    stalk_wide = from_edges(12, [
        (0, 1), (1, 2),
        (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 2),
        (1, 8), (8, 9),
        (2, 10), (4, 11),
    ])
    out.append(CorpusInstance("stalk_wide_d5", stalk_wide, 5))
    out.append(CorpusInstance("stalk_wide_d4", stalk_wide, 4))

    # 8-ring through the source: two-step tail at 3 plus pendants at 5 and 4
    twin_tails = from_edges(12, _ring(8) + [(3, 8), (8, 9), (5, 10), (4, 11)])
    out.append(CorpusInstance("twin_tails", twin_tails, 5))

    # 8-ring with two two-step tails (both targets have one short path)
    two_tails = from_edges(12, _ring(8) + [(3, 8), (8, 9), (5, 10), (10, 11)])
    out.append(CorpusInstance("two_tails", two_tails, 5))

    # 8-ring with a tail at 3 and a pendant pair on the antipode
    antipode_pair = from_edges(12, _ring(8) + [(3, 8), (8, 9), (4, 10), (4, 11)])
    out.append(CorpusInstance("antipode_pair", antipode_pair, 5))

    # 10-ring far beyond the bound: behind-target near the source stays cheap
    far_ring = from_edges(12, _ring(10) + [(1, 10), (0, 11)])
    out.append(CorpusInstance("far_ring", far_ring, 3))

    # 10-ring with a pendant at the source and a far twin-path tail
    far_twin = from_edges(12, _ring(10) + [(0, 10), (5, 11)])
    out.append(CorpusInstance("far_twin", far_twin, 3))

    # 6-ring fully within reach; pendants at the source, the antipode, and 2
    ringlet_full = from_edges(9, _ring(6) + [(0, 6), (3, 7), (2, 8)])
    out.append(CorpusInstance("ringlet_full", ringlet_full, 5))

    # 5-ring entirely outside the two-path bound, plus a long single chain
    ringlet_part = from_edges(9, _ring(5) + [(0, 5), (0, 6), (6, 7), (7, 8)])
    out.append(CorpusInstance("ringlet_part", ringlet_part, 2))

    # fully-short 7-ring: three-step stem at 3, pendant at 2 on its short
    # path, gate pendant at the source; two-node gaps keep view paths honest
    stem_seven = from_edges(12, _ring(7) + [(3, 7), (7, 8), (8, 9), (2, 10), (0, 11)])
    out.append(CorpusInstance("stem_seven", stem_seven, 6))

    # 4-ring with a branching stem behind node 1 and a pendant opposite
    shared_exit = from_edges(9, _ring(4) + [(1, 4), (4, 5), (5, 6), (5, 7), (3, 8)])
    out.append(CorpusInstance("shared_exit", shared_exit, 4))

    out.append(CorpusInstance("palm_within", palm_tree(8, 3), 3))
    out.append(CorpusInstance("palm_beyond", palm_tree(8, 3), 2))

    bare_tree = from_edges(7, [(0, 1), (1, 2), (1, 3), (0, 4), (4, 5), (4, 6)])
    out.append(CorpusInstance("bare_tree", bare_tree, 2))

    return out
