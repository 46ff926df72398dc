"""Closed-form engine: expectation formulas and pairwise visit-order tables.

The pairwise tables give, for each seeking strategy, the exact probability
that a node ``v`` is visited before the hiding node ``t`` on a graph with at
most one cycle.  Values depend only on coarse structural classes:

* how many simple paths reach a node and how many of them fit the bound ``d``;
* whether a node sits on the cycle, strictly behind it, or before it;
* for nodes behind the cycle, where their paths leave it (the exit node).

Every branch carries a ``case_label`` so coverage of the whole table can be
audited, and every returned probability is checked against the enumeration
oracle in the verification suites.  Branches are evaluated strictly in
listing order; combinations the tables do not cover raise
:class:`PreconditionViolated` rather than extrapolating.

All arithmetic is exact (``fractions.Fraction``); floats never enter.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotATree, PreconditionViolated
from .graphs import (
    Graph,
    bfs_distances,
    cached_profiles,
    cycle_exit,
    find_cycle,
    must_pass,
    simple_path_counts,
)
from .hider import BenefitFunction

STRATEGIES = ("dfs", "dfs_d", "adfs", "sigma_star")

# The closed universe of table probabilities.  17/32 is produced by the
# upfront mixture when the cycle lies fully within reach and the revealed
# node's exit sits on the target's short path (1/2 + 1/32).
TABLE_PROBABILITIES = frozenset(
    Fraction(*pair)
    for pair in [
        (0, 1), (1, 3), (3, 8), (1, 2), (17, 32), (13, 24), (9, 16),
        (5, 8), (2, 3), (11, 16), (3, 4), (13, 16), (1, 1),
    ]
)

# Every case label each strategy's table can emit (used for coverage audits).
ALL_CASE_LABELS: dict[str, frozenset[str]] = {
    "dfs": frozenset({
        "dfs:free-target",
        "dfs:gate-target:v-single",
        "dfs:gate-target:v-double",
        "dfs:cycle-pair",
        "dfs:behind-target:v-cycle",
        "dfs:behind-target:v-behind",
    }),
    "adfs": frozenset({
        "adfs:free-target",
        "adfs:gate-target:v-single",
        "adfs:gate-target:v-cycle",
        "adfs:gate-target:v-behind",
        "adfs:cycle-pair",
        "adfs:behind-target:v-cycle",
        "adfs:behind-target:v-behind",
    }),
    "dfs_d": frozenset({
        "dfs_d:far-v",
        "dfs_d:free-target",
        "dfs_d:gate-target:v-two-short",
        "dfs_d:gate-target:v-single-short",
        "dfs_d:gate-target:v-one-short-cycle-reachable",
        "dfs_d:gate-target:v-one-short-cycle-partial",
        "dfs_d:cycle-pair",
        "dfs_d:behind-target:v-on-short-path",
        "dfs_d:behind-target:v-two-short",
        "dfs_d:behind-target:v-one-short",
        "dfs_d:both-behind:reachable:exit-on-path",
        "dfs_d:both-behind:reachable:exit-off-path",
        "dfs_d:both-behind:reachable:both-short",
        "dfs_d:both-behind:reachable:both-one-short",
        "dfs_d:both-behind:partial:target-one-v-two",
        "dfs_d:both-behind:partial:both-short",
        "dfs_d:both-behind:partial:both-one-short",
    }),
    "sigma_star": frozenset({
        "sigma_star:free-target:near",
        "sigma_star:free-target:far",
        "sigma_star:gate-target:v-single-short",
        "sigma_star:gate-target:v-one-short-cycle",
        "sigma_star:gate-target:v-one-short-cycle-reachable",
        "sigma_star:gate-target:v-one-short-cycle-partial",
        "sigma_star:gate-target:v-two-short-cycle",
        "sigma_star:gate-target:v-two-short-behind",
        "sigma_star:gate-target:v-single-far",
        "sigma_star:gate-target:v-cycle-far",
        "sigma_star:gate-target:v-behind-far",
        "sigma_star:cycle-pair",
        "sigma_star:behind-target:v-on-short-path",
        "sigma_star:behind-target:v-two-short",
        "sigma_star:behind-target:v-one-short",
        "sigma_star:behind-target:v-far",
        "sigma_star:both-behind:reachable:exit-on-path",
        "sigma_star:both-behind:reachable:exit-off-path",
        "sigma_star:both-behind:reachable:both-short",
        "sigma_star:both-behind:reachable:both-one-short",
        "sigma_star:both-behind:partial:target-one-v-two",
        "sigma_star:both-behind:partial:both-short",
        "sigma_star:both-behind:partial:both-one-short",
    }),
}


@dataclass(frozen=True)
class PairwiseCaseResult:
    probability: Fraction
    case_label: str


def tree_dfs_expected_position(g: Graph, s: int, t: int) -> Fraction:
    """Expected position of ``t`` under randomized DFS on a tree: (n + dist - m) / 2.

    ``m`` counts the nodes whose path from ``s`` passes through ``t``
    (including ``t`` itself).
    """
    if not g.is_tree():
        raise NotATree(f"graph has {g.edge_count} edges over {g.n} nodes")
    dist_s = bfs_distances(g, s)
    dist_t = bfs_distances(g, t)
    m = sum(1 for v in g.node_set if dist_s[v] == dist_s[t] + dist_t[v])
    return Fraction(g.n + dist_s[t] - m, 2)


def palm_expected_position(n: int, d: int) -> Fraction:
    """Value of crown-uniform hiding on a palm tree: (n + d - 1) / 2."""
    if not 1 <= d <= n - 1:
        raise ValueError(f"height {d} invalid for {n} nodes")
    return Fraction(n + d - 1, 2)


def hider_payoff(benefit: BenefitFunction, d: int, n: int) -> Fraction:
    """Hider payoff for hiding at distance ``d``: benefit(d) * (n + d - 1) / 2."""
    if not 0 <= d <= n - 1:
        raise ValueError(f"distance {d} out of range for {n} nodes")
    return benefit(d) * Fraction(n + d - 1, 2)


def mixture_capture_bound(n: int, d: int) -> Fraction:
    """Upper bound on expected capture position under the upfront mixture."""
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    return Fraction(9 * n, 16) + Fraction(13 * d - 11, 16)


@dataclass(frozen=True)
class _PairContext:
    g: Graph
    s: int
    t: int
    v: int
    d: int | None
    cycle_nodes: frozenset[int]
    single: frozenset[int]      # exactly one simple path from s
    double: frozenset[int]      # exactly two simple paths from s
    gate: frozenset[int]        # single-path nodes whose path passes the entrance
    t_category: str             # free | gate | cycle | behind

    def count_within(self, node: int, bound: int) -> int:
        return cached_profiles(self.g, self.s).count_within(node, bound)

    def distance(self, node: int) -> int:
        return cached_profiles(self.g, self.s).distance(node)

    def one_short(self, node: int) -> bool:
        return self.d is not None and self.count_within(node, self.d) == 1

    def two_short(self, node: int) -> bool:
        return self.d is not None and self.count_within(node, self.d) == 2

    def cycle_fully_short(self) -> bool:
        # the entrance (or the source itself, when it sits on the cycle) has a
        # single path by definition and does not count against full coverage
        return all(
            self.two_short(w) for w in self.cycle_nodes if w not in self.single
        )

    def cycle_meets_short(self) -> bool:
        return any(self.two_short(w) for w in self.cycle_nodes)

    def unique_short_path_contains(self, target: int, node: int) -> bool:
        """target has exactly one path of length <= d and it passes node."""
        assert self.d is not None
        if self.count_within(target, self.d) != 1:
            return False
        return simple_path_counts(self.g, self.s, self.d, through=node)[target] == 1

    def aligned_cycle_pair(self) -> bool:
        """Both nodes one-short with one sitting on the other's short path.

        Such pairs share the entrance successor, so the visit order is forced
        rather than an even coin; the tables do not cover them.
        """
        if not (self.one_short(self.t) and self.one_short(self.v)):
            return False
        return (
            self.unique_short_path_contains(self.t, self.v)
            or self.unique_short_path_contains(self.v, self.t)
        )

    def exit_at_entrance_successor(self, node: int) -> bool:
        """Whether the node's paths leave the cycle right next to the entrance.

        The behind-the-cycle derivations picture the exit strictly between the
        two entrance successors; a pendant hanging on a successor collapses
        the independent coins they rely on.
        """
        prof = cached_profiles(self.g, self.s)
        anchor = prof.anchor.get(node)
        if anchor is None or prof.entrance is None:
            return False
        return anchor in self.g.adj[prof.entrance] and anchor in self.cycle_nodes


def _build_context(strategy: str, g: Graph, s: int, t: int, v: int, d: int | None) -> _PairContext:
    cyc = find_cycle(g)
    if v == t:
        raise PreconditionViolated("nodes-not-distinct", f"t = v = {t}")
    prof = cached_profiles(g, s)
    cycle_nodes = cyc.node_set if cyc is not None else frozenset()
    if cyc is not None and not (g.is_leaf(t) or t in cycle_nodes):
        raise PreconditionViolated("target-not-leaf-or-cycle", f"t = {t}")
    if v in must_pass(g, s, t):
        raise PreconditionViolated("v-on-every-target-path", f"v = {v}")
    if t in must_pass(g, s, v):
        raise PreconditionViolated("target-on-every-v-path", f"t = {t}, v = {v}")
    single = prof.single_path
    if t in single:
        t_category = "gate" if t in prof.through_entrance else "free"
    elif t in cycle_nodes:
        t_category = "cycle"
    else:
        t_category = "behind"
    ctx = _PairContext(
        g=g, s=s, t=t, v=v, d=d,
        cycle_nodes=cycle_nodes,
        single=single,
        double=prof.double_path,
        gate=prof.through_entrance,
        t_category=t_category,
    )
    if strategy in ("dfs_d", "sigma_star"):
        if d is None:
            raise ValueError(f"{strategy} needs the bound d")
        if ctx.distance(t) > d:
            raise PreconditionViolated("target-beyond-bound", f"dist(s,{t}) > {d}")
    return ctx


def _no_row(strategy: str, detail: str):
    raise PreconditionViolated("no-table-row", f"{strategy}: {detail}")


def _dfs_value(ctx: _PairContext) -> PairwiseCaseResult:
    v = ctx.v
    if ctx.t_category == "free":
        return PairwiseCaseResult(Fraction(1, 2), "dfs:free-target")
    if ctx.t_category == "gate":
        if v in ctx.single:
            return PairwiseCaseResult(Fraction(1, 2), "dfs:gate-target:v-single")
        return PairwiseCaseResult(Fraction(2, 3), "dfs:gate-target:v-double")
    if ctx.t_category == "cycle":
        if v in ctx.cycle_nodes:
            return PairwiseCaseResult(Fraction(1, 2), "dfs:cycle-pair")
        _no_row("dfs", "target on the cycle, v off it")
    if v in ctx.cycle_nodes:
        return PairwiseCaseResult(Fraction(3, 4), "dfs:behind-target:v-cycle")
    if v in ctx.double:
        return PairwiseCaseResult(Fraction(1, 2), "dfs:behind-target:v-behind")
    _no_row("dfs", "target behind the cycle, single-path v")


def _adfs_value(ctx: _PairContext) -> PairwiseCaseResult:
    v = ctx.v
    if ctx.t_category == "free":
        return PairwiseCaseResult(Fraction(1, 2), "adfs:free-target")
    if ctx.t_category == "gate":
        if v in ctx.single:
            return PairwiseCaseResult(Fraction(1, 2), "adfs:gate-target:v-single")
        if v in ctx.cycle_nodes:
            return PairwiseCaseResult(Fraction(2, 3), "adfs:gate-target:v-cycle")
        if ctx.exit_at_entrance_successor(v):
            _no_row("adfs", "v hangs off an entrance successor (degenerate exit)")
        return PairwiseCaseResult(Fraction(1, 3), "adfs:gate-target:v-behind")
    if ctx.t_category == "cycle":
        if v in ctx.cycle_nodes:
            return PairwiseCaseResult(Fraction(1, 2), "adfs:cycle-pair")
        _no_row("adfs", "target on the cycle, v off it")
    if v in ctx.cycle_nodes:
        return PairwiseCaseResult(Fraction(3, 4), "adfs:behind-target:v-cycle")
    if v in ctx.double:
        return PairwiseCaseResult(Fraction(1, 2), "adfs:behind-target:v-behind")
    _no_row("adfs", "target behind the cycle, single-path v")


def _require_cycle_in_reach(ctx: _PairContext, strategy: str) -> None:
    # the bounded-DFS rows are only derived when some cycle node is reachable
    # by two short paths; outside that domain the table refuses
    if ctx.cycle_nodes and not ctx.cycle_meets_short():
        raise PreconditionViolated(
            "cycle-outside-bound", f"{strategy}: no cycle node has two paths within d"
        )


def _dfs_d_value(ctx: _PairContext) -> PairwiseCaseResult:
    v, d = ctx.v, ctx.d
    assert d is not None
    if ctx.distance(v) > d:
        # everything within reach is visited before anything beyond it,
        # regardless of how much of the cycle the bound covers
        return PairwiseCaseResult(Fraction(0), "dfs_d:far-v")
    _require_cycle_in_reach(ctx, "dfs_d")
    if ctx.t_category == "free":
        return PairwiseCaseResult(Fraction(1, 2), "dfs_d:free-target")
    if ctx.t_category == "gate":
        if ctx.two_short(v):
            return PairwiseCaseResult(Fraction(2, 3), "dfs_d:gate-target:v-two-short")
        if v in ctx.single:
            return PairwiseCaseResult(Fraction(1, 2), "dfs_d:gate-target:v-single-short")
        if ctx.cycle_fully_short():
            return PairwiseCaseResult(Fraction(2, 3), "dfs_d:gate-target:v-one-short-cycle-reachable")
        return PairwiseCaseResult(Fraction(1, 2), "dfs_d:gate-target:v-one-short-cycle-partial")
    if ctx.t_category == "cycle":
        if v in ctx.cycle_nodes:
            if ctx.aligned_cycle_pair():
                _no_row("dfs_d", "aligned one-short cycle pair (forced order)")
            return PairwiseCaseResult(Fraction(1, 2), "dfs_d:cycle-pair")
        _no_row("dfs_d", "target on the cycle, v off it")
    # target strictly behind the cycle
    if v in ctx.cycle_nodes:
        if ctx.unique_short_path_contains(ctx.t, v):
            return PairwiseCaseResult(Fraction(1), "dfs_d:behind-target:v-on-short-path")
        if ctx.two_short(v):
            return PairwiseCaseResult(Fraction(3, 4), "dfs_d:behind-target:v-two-short")
        return PairwiseCaseResult(Fraction(1, 2), "dfs_d:behind-target:v-one-short")
    if v not in ctx.double:
        _no_row("dfs_d", "target behind the cycle, single-path v")
    t_short, v_short = ctx.two_short(ctx.t), ctx.two_short(v)
    if t_short and not v_short:
        _no_row("dfs_d", "two-short target against one-short v is underived")
    if ctx.cycle_fully_short():
        if not t_short and v_short:
            exit_v = cycle_exit(ctx.g, find_cycle(ctx.g), ctx.s, v)
            if ctx.unique_short_path_contains(ctx.t, exit_v):
                return PairwiseCaseResult(Fraction(5, 8), "dfs_d:both-behind:reachable:exit-on-path")
            return PairwiseCaseResult(Fraction(1, 2), "dfs_d:both-behind:reachable:exit-off-path")
        if t_short and v_short:
            return PairwiseCaseResult(Fraction(1, 2), "dfs_d:both-behind:reachable:both-short")
        return PairwiseCaseResult(Fraction(1, 2), "dfs_d:both-behind:reachable:both-one-short")
    if not t_short and v_short:
        return PairwiseCaseResult(Fraction(3, 4), "dfs_d:both-behind:partial:target-one-v-two")
    if t_short and v_short:
        return PairwiseCaseResult(Fraction(1, 2), "dfs_d:both-behind:partial:both-short")
    return PairwiseCaseResult(Fraction(1, 2), "dfs_d:both-behind:partial:both-one-short")


def _sigma_value(ctx: _PairContext) -> PairwiseCaseResult:
    v, d = ctx.v, ctx.d
    assert d is not None
    far_v = ctx.distance(v) > d

    def gated(value: Fraction, label: str) -> PairwiseCaseResult:
        _require_cycle_in_reach(ctx, "sigma_star")
        return PairwiseCaseResult(value, label)

    if ctx.t_category == "free":
        if far_v:
            return PairwiseCaseResult(Fraction(3, 8), "sigma_star:free-target:far")
        return gated(Fraction(1, 2), "sigma_star:free-target:near")
    if ctx.t_category == "gate":
        if far_v:
            if v in ctx.single:
                return PairwiseCaseResult(Fraction(3, 8), "sigma_star:gate-target:v-single-far")
            if v in ctx.cycle_nodes:
                return PairwiseCaseResult(Fraction(1, 2), "sigma_star:gate-target:v-cycle-far")
            if ctx.exit_at_entrance_successor(v):
                _no_row("sigma_star", "v hangs off an entrance successor (degenerate exit)")
            return PairwiseCaseResult(Fraction(3, 8), "sigma_star:gate-target:v-behind-far")
        if ctx.one_short(v):
            if v in ctx.single:
                return gated(Fraction(1, 2), "sigma_star:gate-target:v-single-short")
            if v in ctx.cycle_nodes:
                return gated(Fraction(5, 8), "sigma_star:gate-target:v-one-short-cycle")
            if ctx.exit_at_entrance_successor(v):
                _no_row("sigma_star", "v hangs off an entrance successor (degenerate exit)")
            if ctx.cycle_fully_short():
                return gated(Fraction(13, 24), "sigma_star:gate-target:v-one-short-cycle-reachable")
            return gated(Fraction(1, 2), "sigma_star:gate-target:v-one-short-cycle-partial")
        if v in ctx.cycle_nodes:
            return gated(Fraction(2, 3), "sigma_star:gate-target:v-two-short-cycle")
        if ctx.exit_at_entrance_successor(v):
            _no_row("sigma_star", "v hangs off an entrance successor (degenerate exit)")
        return gated(Fraction(13, 24), "sigma_star:gate-target:v-two-short-behind")
    if ctx.t_category == "cycle":
        if v in ctx.cycle_nodes:
            if ctx.aligned_cycle_pair():
                _no_row("sigma_star", "aligned one-short cycle pair (forced order)")
            return gated(Fraction(1, 2), "sigma_star:cycle-pair")
        _no_row("sigma_star", "target on the cycle, v off it")
    # target strictly behind the cycle
    if v in ctx.cycle_nodes:
        if not far_v and ctx.unique_short_path_contains(ctx.t, v):
            return gated(Fraction(13, 16), "sigma_star:behind-target:v-on-short-path")
        if ctx.two_short(v):
            return gated(Fraction(3, 4), "sigma_star:behind-target:v-two-short")
        if ctx.one_short(v):
            return gated(Fraction(11, 16), "sigma_star:behind-target:v-one-short")
        return PairwiseCaseResult(Fraction(9, 16), "sigma_star:behind-target:v-far")
    if v not in ctx.double:
        _no_row("sigma_star", "target behind the cycle, single-path v")
    if far_v:
        _no_row("sigma_star", "both behind the cycle with v beyond reach is unlisted")
    t_short, v_short = ctx.two_short(ctx.t), ctx.two_short(v)
    if t_short and not v_short:
        _no_row("sigma_star", "two-short target against one-short v is underived")
    if ctx.cycle_fully_short():
        if not t_short and v_short:
            exit_v = cycle_exit(ctx.g, find_cycle(ctx.g), ctx.s, v)
            if ctx.unique_short_path_contains(ctx.t, exit_v):
                return gated(Fraction(17, 32), "sigma_star:both-behind:reachable:exit-on-path")
            return gated(Fraction(1, 2), "sigma_star:both-behind:reachable:exit-off-path")
        if t_short and v_short:
            return gated(Fraction(1, 2), "sigma_star:both-behind:reachable:both-short")
        return gated(Fraction(1, 2), "sigma_star:both-behind:reachable:both-one-short")
    if not t_short and v_short:
        return gated(Fraction(9, 16), "sigma_star:both-behind:partial:target-one-v-two")
    if t_short and v_short:
        return gated(Fraction(1, 2), "sigma_star:both-behind:partial:both-short")
    return gated(Fraction(1, 2), "sigma_star:both-behind:partial:both-one-short")


_VALUE_FUNCS = {
    "dfs": _dfs_value,
    "adfs": _adfs_value,
    "dfs_d": _dfs_d_value,
    "sigma_star": _sigma_value,
}


def pairwise_probability(
    strategy: str,
    g: Graph,
    s: int,
    t: int,
    v: int,
    d: int | None = None,
) -> PairwiseCaseResult:
    """Exact probability that ``v`` precedes the hiding node ``t``.

    Raises :class:`PreconditionViolated` (with the failed clause) outside the
    table's domain.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    ctx = _build_context(strategy, g, s, t, v, d)
    result = _VALUE_FUNCS[strategy](ctx)
    assert result.probability in TABLE_PROBABILITIES
    return result


def expected_position_from_tables(
    strategy: str,
    g: Graph,
    s: int,
    t: int,
    d: int | None = None,
) -> Fraction:
    """Expected position of ``t`` as the sum of pairwise probabilities.

    Nodes on every source->t path contribute 1; nodes reachable only through
    ``t`` contribute 0 (expanding search cannot reach them earlier).
    """
    anchors = must_pass(g, s, t)
    total = Fraction(len(anchors) - 1)
    for v in g.node_set - anchors:
        if t in must_pass(g, s, v):
            continue
        total += pairwise_probability(strategy, g, s, t, v, d).probability
    return total


def pairwise_csv_rows(
    instance: str,
    strategy: str,
    g: Graph,
    s: int,
    d: int | None = None,
) -> list[str]:
    """Serialize every admissible pairwise probability as CSV rows.

    Row format: ``instance,strategy,t,v,case_label,p/q``.
    """
    rows = []
    for t in sorted(g.node_set):
        for v in sorted(g.node_set):
            if v == t:
                continue
            try:
                res = pairwise_probability(strategy, g, s, t, v, d)
            except PreconditionViolated:
                continue
            rows.append(f"{instance},{strategy},{t},{v},{res.case_label},{res.probability}")
    return rows
