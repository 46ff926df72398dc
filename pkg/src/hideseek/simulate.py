"""Seeded Monte Carlo harness for instances beyond exact-enumeration reach.

Per-trial generators are derived from the master seed by hashing
``seed:index``, so any subset of trials can be run on any worker in any
order and the merged result never changes.
"""
from __future__ import annotations

import hashlib
import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction

from .graphs import Graph
from .hider import HiderStrategy
from .seeker import ExecutionCache, SeekerPolicy, execute, sample_position

WORKERS_ENV = "HIDESEEK_WORKERS"


def trial_rng(seed: int, index: int) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


def run_episode(policy: SeekerPolicy, g: Graph, h: int, seed: int, index: int) -> int:
    """Position of ``h`` in one sampled episode; a pure function of (seed, index)."""
    episode = execute(policy, g, trial_rng(seed, index))
    return episode.pos(h)


def _sample_atom(strategy: HiderStrategy, rng: random.Random) -> tuple[Graph, int]:
    r = rng.random()
    acc = Fraction(0)
    for g, h, p in strategy.atoms:
        acc += p
        if r < acc:
            return g, h
    g, h, _ = strategy.atoms[-1]
    return g, h


@dataclass(frozen=True)
class MonteCarloResult:
    trials: int
    seed: int
    mean: float
    stderr: float
    ci_lo: float
    ci_hi: float

    def covers(self, value, width: float = 4.0) -> bool:
        """Whether ``value`` lies within ``width`` standard errors of the mean."""
        return abs(self.mean - float(value)) <= width * self.stderr


def _run_chunk(args) -> tuple[int, int]:
    policy, strategy, seed, start, count = args
    total = 0
    total_sq = 0
    cache = ExecutionCache()
    for index in range(start, start + count):
        rng = trial_rng(seed, index)
        g, h = _sample_atom(strategy, rng)
        pos = sample_position(policy, g, h, rng, cache)
        total += pos
        total_sq += pos * pos
    return total, total_sq


def monte_carlo(
    policy: SeekerPolicy,
    strategy: HiderStrategy,
    trials: int,
    seed: int,
    workers: int | None = None,
) -> MonteCarloResult:
    """Sample mean position with a normal-approximation 95% interval."""
    if trials < 1:
        raise ValueError("need at least one trial")
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    chunk = 5000
    jobs = [
        (policy, strategy, seed, start, min(chunk, trials - start))
        for start in range(0, trials, chunk)
    ]
    if workers > 1 and len(jobs) > 1:
        import multiprocessing

        with multiprocessing.Pool(workers) as pool:
            parts = pool.map(_run_chunk, jobs)
    else:
        parts = [_run_chunk(job) for job in jobs]
    total = sum(p for p, _ in parts)
    total_sq = sum(q for _, q in parts)
    mean = total / trials
    if trials > 1:
        variance = (total_sq - trials * mean * mean) / (trials - 1)
        stderr = math.sqrt(max(variance, 0.0) / trials)
    else:
        stderr = 0.0
    half = 1.96 * stderr
    return MonteCarloResult(
        trials=trials,
        seed=seed,
        mean=mean,
        stderr=stderr,
        ci_lo=mean - half,
        ci_hi=mean + half,
    )
