"""Statistical verdicts and exact enumeration oracles.

Two-sample Kolmogorov-Smirnov and total-variation comparisons with recorded
thresholds and seeds, plus brute-force rational enumerations (weight
orders of a small graph, all labelled trees on few vertices, the exact law
of the conditioned walk) used to pin down small-case distributions without
Monte Carlo error.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .additive import bfs_outdegrees
from .graphs import ProperlyWeightedGraph


@dataclass(frozen=True)
class TestVerdict:
    __test__ = False  # not a pytest class despite the name

    statistic: float
    threshold: float
    passed: bool
    description: str
    seeds: tuple[int, ...] = field(default_factory=tuple)

    def to_json(self) -> str:
        return json.dumps(
            {
                "statistic": float(self.statistic),
                "threshold": float(self.threshold),
                "passed": bool(self.passed),
                "description": self.description,
                "seeds": [int(s) for s in self.seeds],
            }
        )


def ks_statistic(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / len(a)
    fb = np.searchsorted(b, grid, side="right") / len(b)
    return float(np.abs(fa - fb).max())


def ks_threshold(n1: int, n2: int, c: float = 1.95) -> float:
    """c * sqrt((n1 + n2) / (n1 n2)); c = 1.95 is the 0.1% level."""
    return c * np.sqrt((n1 + n2) / (n1 * n2))


def ks_two_sample(a, b, description: str, seeds=(), c: float = 1.95) -> TestVerdict:
    stat = ks_statistic(a, b)
    thr = float(ks_threshold(len(a), len(b), c=c))
    return TestVerdict(stat, thr, bool(stat < thr), description, tuple(seeds))


def tv_distance(counts_a: dict, counts_b: dict) -> float:
    """Total variation between two empirical laws given as count dicts."""
    na = sum(counts_a.values())
    nb = sum(counts_b.values())
    keys = set(counts_a) | set(counts_b)
    return 0.5 * sum(
        abs(counts_a.get(k, 0) / na - counts_b.get(k, 0) / nb) for k in keys
    )


def tv_two_sample(
    counts_a: dict, counts_b: dict, threshold: float, description: str, seeds=()
) -> TestVerdict:
    stat = tv_distance(counts_a, counts_b)
    return TestVerdict(stat, threshold, stat < threshold, description, tuple(seeds))


# ---------------------------------------------------------------------------
# Exact enumeration oracles


def enumerate_weight_orders(g: ProperlyWeightedGraph, predicate) -> Fraction:
    """P{predicate(g')} over all |E|! relative orders of i.i.d. edge weights.

    Each permutation is realised by assigning ranks 1..m as the weights, so
    predicates that depend only on the relative order are evaluated exactly.
    Refuses graphs with more than 10 edges.
    """
    m = g.m
    if m > 10:
        raise ValueError("weight-order enumeration limited to 10 edges")
    pairs = [(u, v) for u, v, _ in g.edges]
    hits = 0
    total = 0
    for perm in itertools.permutations(range(1, m + 1)):
        gp = ProperlyWeightedGraph(
            g.n, [(u, v, float(w)) for (u, v), w in zip(pairs, perm)]
        )
        total += 1
        if predicate(gp):
            hits += 1
    return Fraction(hits, total)


def all_cayley_trees(n: int):
    """All n^{n-2} labelled trees on 1..n as edge lists (n <= 5)."""
    if n > 5:
        raise ValueError("tree enumeration limited to n <= 5")
    from .additive import prufer_decode

    if n <= 2:
        yield prufer_decode([], n)
        return
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        yield prufer_decode(list(seq), n)


def cayley_outdegree_law(n: int, root: int = 1) -> dict[tuple, Fraction]:
    """Exact law of the BFS out-degree sequence of a uniform Cayley tree."""
    counts: dict[tuple, int] = {}
    total = 0
    for edges in all_cayley_trees(n):
        seq = bfs_outdegrees(edges, n, root=root)
        counts[seq] = counts.get(seq, 0) + 1
        total += 1
    return {k: Fraction(v, total) for k, v in counts.items()}


def conditioned_walk_law(n: int) -> dict[tuple, Fraction]:
    """Exact law of the conditioned Poisson walk increments for small n.

    P(X = x) is proportional to prod 1/x_i! over first-passage increment
    vectors summing to n - 1; enumerated over all weak compositions.
    """
    if n > 8:
        raise ValueError("exact walk law limited to n <= 8")
    import math

    weights: dict[tuple, Fraction] = {}
    total = Fraction(0)
    for x in _compositions(n - 1, n):
        y = 0
        ok = True
        for i, xi in enumerate(x):
            y += xi - 1
            if i < n - 1 and y < 0:
                ok = False
                break
        if not ok or y != -1:
            continue
        w = Fraction(1)
        for xi in x:
            w /= math.factorial(xi)
        weights[x] = w
        total += w
    return {k: v / total for k, v in weights.items()}


def _compositions(total: int, parts: int):
    """Weak compositions of `total` into `parts` ordered non-negative ints."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def empirical_counts(samples) -> dict:
    """Hashable-sample list to count dict."""
    counts: dict = {}
    for s in samples:
        counts[s] = counts.get(s, 0) + 1
    return counts
