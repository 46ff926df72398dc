"""Named verification suites driven by the CLI and the acceptance tests.

Each suite re-derives a family of closed-form claims with the independent
enumeration oracle (or Monte Carlo sampling where enumeration is out of
reach) and reports one check per verified fact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import (
    ALL_CASE_LABELS,
    hider_payoff,
    mixture_capture_bound,
    pairwise_probability,
    palm_expected_position,
    tree_dfs_expected_position,
)
from .corpus import default_corpus
from .errors import PreconditionViolated
from .graphs import bfs_distances
from .hider import (
    BenefitFunction,
    HiderStrategy,
    all_trees,
    example1_graph,
    example2_graph,
    optimal_hiding_depths,
    palm_crown_mixed,
)
from .oracle import (
    adversarial_policy_battery,
    cached_position_table,
    exact_expected_pos,
    exact_visit_prob,
    reachable_observations,
)
from .seeker import (
    AdjustedDFSPolicy,
    BoundedDFSPolicy,
    DFSPolicy,
    policy_from_id,
    sigma_star,
)
from .simulate import monte_carlo


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.check_id}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, check_id: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(check_id, bool(passed), detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and bool(self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def lines(self) -> list[str]:
        out = [f"[{self.suite}] {c.line()}" for c in self.checks]
        verdict = "PASS" if self.passed else "FAIL"
        out.append(f"[{self.suite}] suite: {verdict} ({len(self.checks)} checks)")
        return out


def run_lemma1(max_n: int = 7) -> SuiteReport:
    """Exact expected DFS position on every labeled tree vs the closed form."""
    report = SuiteReport("lemma1")
    policy = DFSPolicy()
    for n in range(3, max_n + 1):
        trees = 0
        bad = None
        for g in all_trees(n):
            table = cached_position_table(policy, g)
            for t in range(n):
                want = tree_dfs_expected_position(g, 0, t)
                if table[t] != want:
                    bad = f"tree {sorted(g.edges)} target {t}: oracle {table[t]} formula {want}"
                    break
            trees += 1
            if bad:
                break
        report.add(
            f"trees n={n}",
            bad is None,
            bad or f"{trees} trees x {n} targets, exact match",
        )
    return report


def run_lemma2(max_n: int = 10) -> SuiteReport:
    """Crown-uniform hiding on palms pins every battery policy to (n+d-1)/2."""
    report = SuiteReport("lemma2")
    for n in range(2, max_n + 1):
        for d in range(1, n):
            strategy = palm_crown_mixed(n, d)
            want = palm_expected_position(n, d)
            results = adversarial_policy_battery(strategy.atoms[0][0], strategy, d)
            bad = [f"{name}: {value}" for name, value in results if value != want]
            report.add(
                f"palm n={n} d={d}",
                not bad,
                "; ".join(bad) if bad else f"{len(results)} policies = {want}",
            )
    return report


def run_example1(mc_trials: int = 100_000, mc_seed: int = 2024) -> SuiteReport:
    """Decoy-cycle instance: DFS needs 2/3(n + d/2 - 1) steps in expectation."""
    report = SuiteReport("example1")
    policy = DFSPolicy()
    for n, d in [(7, 2), (10, 3), (12, 4)]:
        g, t = example1_graph(n, d)
        got = exact_expected_pos(policy, g, t, memoized=True)
        want = Fraction(2, 3) * (n + Fraction(d, 2) - 1)
        report.add(f"exact n={n} d={d}", got == want, f"oracle {got}, formula {want}")
    n, d = 30, 4
    g, t = example1_graph(n, d)
    want = Fraction(2, 3) * (n + Fraction(d, 2) - 1)
    res = monte_carlo(policy, HiderStrategy.pure(g, t), mc_trials, mc_seed)
    report.add(
        f"monte-carlo n={n} d={d}",
        res.covers(want),
        f"mean {res.mean:.4f} vs {float(want):.4f}, stderr {res.stderr:.5f}",
    )
    return report


def run_example2() -> SuiteReport:
    """Twin-path instance: bounded DFS needs 2/3(n + 1/2) steps in expectation."""
    report = SuiteReport("example2")
    for n, d in [(17, 5), (20, 6)]:
        g, t = example2_graph(n, d)
        got = exact_expected_pos(BoundedDFSPolicy(d), g, t, node_limit=None, memoized=True)
        want = Fraction(2, 3) * (n + Fraction(1, 2))
        report.add(f"exact n={n} d={d}", got == want, f"oracle {got}, formula {want}")
    return report


def run_examples(mc_trials: int = 100_000, mc_seed: int = 2024) -> SuiteReport:
    report = SuiteReport("examples")
    for sub in (run_example1(mc_trials, mc_seed), run_example2()):
        report.checks.extend(
            CheckResult(f"{sub.suite}:{c.check_id}", c.passed, c.detail) for c in sub.checks
        )
    return report


def _corpus_pairs(instance, strategy):
    g, d = instance.graph, instance.d
    for t in range(g.n):
        for v in range(g.n):
            if v == t:
                continue
            try:
                yield t, v, pairwise_probability(strategy, g, 0, t, v, d)
            except PreconditionViolated:
                continue


def run_tables(corpus: str = "default") -> SuiteReport:
    """Table probabilities vs the oracle on the corpus, with branch coverage."""
    if corpus != "default":
        raise ValueError(f"unknown corpus {corpus!r}")
    report = SuiteReport("tables")
    fired: dict[str, int] = {}
    for instance in default_corpus():
        g, d = instance.graph, instance.d
        for strategy in ("dfs", "adfs", "dfs_d", "sigma_star"):
            policy = policy_from_id(strategy, d=d)
            bad = None
            pairs = 0
            for t, v, res in _corpus_pairs(instance, strategy):
                got = exact_visit_prob(policy, g, v, t, node_limit=None, memoized=True)
                fired[res.case_label] = fired.get(res.case_label, 0) + 1
                pairs += 1
                if got != res.probability:
                    bad = f"(t={t}, v={v}) {res.case_label}: table {res.probability} oracle {got}"
                    break
            if bad:
                report.add(f"{instance.name}/{strategy}", False, bad)
            elif pairs:
                report.add(f"{instance.name}/{strategy}", True, f"{pairs} pairs exact")
    for strategy, labels in ALL_CASE_LABELS.items():
        missing = sorted(labels - set(fired))
        report.add(
            f"coverage/{strategy}",
            not missing,
            f"missing: {missing}" if missing else f"{len(labels)} branches fired",
        )
    return report


def run_prop1() -> SuiteReport:
    """Mixture bound 9n/16 + (13d-11)/16 plus the component-identity check."""
    report = SuiteReport("prop1")
    for instance in default_corpus():
        g, d = instance.graph, instance.d
        mix = sigma_star(d)
        dfs, adfs, dfsd = DFSPolicy(), AdjustedDFSPolicy(), BoundedDFSPolicy(d)
        bound = mixture_capture_bound(g.n, d)
        dist = bfs_distances(g, 0)
        worst = None
        for h in range(g.n):
            if dist[h] > d:
                continue
            value = exact_expected_pos(mix, g, h, node_limit=None, memoized=True)
            if worst is None or value > worst[1]:
                worst = (h, value)
            if value > bound:
                break
        h, value = worst
        report.add(
            f"{instance.name}/bound",
            value <= bound,
            f"max E[pos] = {value} at h={h}, bound {bound}",
        )
        bad = None
        pairs = 0
        for t, v, res in _corpus_pairs(instance, "sigma_star"):
            combo = (
                Fraction(3, 8) * exact_visit_prob(dfs, g, v, t, node_limit=None, memoized=True)
                + Fraction(3, 8) * exact_visit_prob(adfs, g, v, t, node_limit=None, memoized=True)
                + Fraction(1, 4) * exact_visit_prob(dfsd, g, v, t, node_limit=None, memoized=True)
            )
            pairs += 1
            if combo != res.probability:
                bad = f"(t={t}, v={v}): table {res.probability}, component mix {combo}"
                break
        report.add(
            f"{instance.name}/identity",
            bad is None,
            bad or f"{pairs} pairs: 3/8 dfs + 3/8 adfs + 1/4 dfs_d matches",
        )
    return report


def _equilibrium_benefits(n: int) -> list[BenefitFunction]:
    out = [BenefitFunction.step(cut, n) for cut in range(1, n)]
    out.append(BenefitFunction.geometric("1/2", n))
    out.append(BenefitFunction.geometric("0.9", n))
    return out


def run_equilibrium(
    ns: tuple[int, ...] = (5, 6, 7),
    benefit_specs: tuple[str, ...] | None = None,
) -> SuiteReport:
    """Exhaustive best responses against DFS and the seeker-side tie check.

    The depth score benefit(d) * (n+d-1)/2 is compared over d >= 1: depth 0
    means hiding at the source, which is found immediately and can never be a
    best response, and no palm of height 0 exists to realize the score.
    """
    report = SuiteReport("equilibrium")
    policy = DFSPolicy()
    for n in ns:
        if benefit_specs:
            benefits = [BenefitFunction.from_spec(spec, n) for spec in benefit_specs]
        else:
            benefits = _equilibrium_benefits(n)
        position_tables = []
        for g in all_trees(n):
            position_tables.append((cached_position_table(policy, g), bfs_distances(g, 0)))
        tie_depths: set[int] = set()
        for benefit in benefits:
            pure_scores = {d: hider_payoff(benefit, d, n) for d in range(1, n)}
            want = max(pure_scores.values())
            d_star = min(d for d, val in pure_scores.items() if val == want)
            tie_depths.add(d_star)
            best = Fraction(0)
            for table, dist in position_tables:
                for h in range(n):
                    payoff = benefit(dist[h]) * table[h]
                    if payoff > best:
                        best = payoff
            crown = palm_crown_mixed(n, d_star)
            crown_value = sum(
                (p * cached_position_table(policy, g)[h] for g, h, p in crown.atoms),
                Fraction(0),
            )
            crown_payoff = benefit(d_star) * crown_value
            report.add(
                f"best-response n={n} {benefit.kind}",
                best == want and crown_payoff == want,
                f"search max {best}, palm-crown payoff {crown_payoff}, target {want}",
            )
        del position_tables
        for d_star in sorted(tie_depths):
            strategy = palm_crown_mixed(n, d_star)
            want = palm_expected_position(n, d_star)
            results = adversarial_policy_battery(strategy.atoms[0][0], strategy, d_star)
            bad = [f"{name}: {val}" for name, val in results if val != want]
            report.add(
                f"seeker-tie n={n} d={d_star}",
                not bad,
                "; ".join(bad) if bad else f"{len(results)} policies tie at {want}",
            )
    if benefit_specs is None:
        tie = optimal_hiding_depths(BenefitFunction.geometric("0.9", 10), 10)
        report.add(
            "depth-tie rho=0.9 n=10",
            tie == frozenset({0, 1}),
            f"optimal depths {sorted(tie)}",
        )
    return report


def run_equivalence(max_n: int = 7) -> SuiteReport:
    """On trees, bound-n DFS and adjusted DFS match plain DFS observation-wise."""
    report = SuiteReport("equivalence")
    dfs = DFSPolicy()
    for n in range(2, max_n + 1):
        bounded = BoundedDFSPolicy(n)
        adjusted = AdjustedDFSPolicy()
        observations = 0
        bad = None
        for g in all_trees(n):
            for obs in reachable_observations(dfs, g):
                base = dfs.distribution(obs)
                if bounded.distribution(obs) != base:
                    bad = f"dfs_{n} differs at {obs.visited} on {sorted(g.edges)}"
                    break
                if adjusted.distribution(obs) != base:
                    bad = f"adfs differs at {obs.visited} on {sorted(g.edges)}"
                    break
                observations += 1
            if bad:
                break
        report.add(
            f"trees n={n}",
            bad is None,
            bad or f"{observations} observations, distributions identical",
        )
    return report


SUITES = {
    "lemma1": run_lemma1,
    "lemma2": run_lemma2,
    "tables": run_tables,
    "examples": run_examples,
    "prop1": run_prop1,
    "equilibrium": run_equilibrium,
    "equivalence": run_equivalence,
}
