"""Combinatorial additive coalescent: conditioned walk, parking, forests.

One object drives everything: a walk with i.i.d. Poisson(1) increments minus
drift, conditioned to first hit -1 at time n.  Thinning its unit increments
couples the walk family across the retention level t; ladder intervals of
the thinned walk are the cluster sizes.  The same law shows up as block
sizes of a circular parking scheme, as tree sizes of Pitman's forest-valued
merge process, and as percolation clusters of a uniform Cayley tree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import ProperlyWeightedGraph, PrimOrdering, prim_order
from .states import MassVector
from .walks import (
    DEFAULT_CONVENTION,
    LatticePath,
    excursions_above_min,
    sorted_lengths,
)


@dataclass(frozen=True)
class ConditionedWalk:
    """Increments X(1..n) of the Poisson walk conditioned on tau_{-1} = n."""

    n: int
    increments: np.ndarray

    def __init__(self, n: int, increments):
        x = np.asarray(increments, dtype=int)
        if n < 1 or len(x) != n:
            raise ValueError("need n >= 1 increments")
        if (x < 0).any() or x.sum() != n - 1:
            raise ValueError("increments must be non-negative and sum to n-1")
        y = np.cumsum(x - 1)
        if (y[:-1] < 0).any() or y[-1] != -1:
            raise ValueError("walk must first hit -1 at time n")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "increments", x.copy())

    def path(self) -> LatticePath:
        """Y(0..n) with Y(m) = sum_{j<=m} (X(j) - 1)."""
        vals = np.concatenate([[0], np.cumsum(self.increments - 1)])
        return LatticePath(vals)


def sample_conditioned_walk(n: int, rng) -> ConditionedWalk:
    """Exact O(n) sampler via the cycle lemma.

    Multinomial(n-1; uniform over n cells) is the law of i.i.d. Poisson(1)
    conditioned on total n-1; exactly one cyclic rotation of the increments
    is a first-passage path, and rotating to start right after the first
    minimum of the partial sums finds it.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x = rng.multinomial(n - 1, np.full(n, 1.0 / n))
    y = np.cumsum(x - 1)
    pivot = int(np.argmin(y)) + 1  # first index (1-based) attaining the min
    rotated = np.concatenate([x[pivot:], x[:pivot]]) if pivot < n else x
    return ConditionedWalk(n, rotated)


def rejection_sample_conditioned_walk(n: int, rng, max_tries: int = 10**7) -> ConditionedWalk:
    """Literal rejection sampler (test oracle, practical only for small n)."""
    for _ in range(max_tries):
        x = rng.poisson(1.0, size=n)
        if x.sum() != n - 1:
            continue
        y = np.cumsum(x - 1)
        if (y[:-1] >= 0).all() and y[-1] == -1:
            return ConditionedWalk(n, x)
    raise RuntimeError("rejection sampler exhausted max_tries")


class ThinnedWalkFamily:
    """Monotone coupling of thinned walks across retention levels t.

    Each unit increment of the base walk carries one stored uniform; the
    level-t walk keeps the units whose uniform is <= t, so the family is
    non-decreasing in t on a single sample.
    """

    def __init__(self, walk: ConditionedWalk, rng):
        self.walk = walk
        self.n = walk.n
        # unit j belongs to step _owner[j]; one stored uniform per unit
        self._owner = np.repeat(np.arange(walk.n), walk.increments)
        self._uniforms = rng.random(int(walk.increments.sum()))

    def thinned_increments(self, t: float) -> np.ndarray:
        if not (0.0 <= t <= 1.0):
            raise ValueError("retention t must lie in [0, 1]")
        kept = self._uniforms <= t
        return np.bincount(self._owner[kept], minlength=self.n).astype(int)

    def path(self, t: float) -> LatticePath:
        """Y^{(t)}(0..n), the thinned walk with unit drift."""
        x = self.thinned_increments(t)
        vals = np.concatenate([[0], np.cumsum(x - 1)])
        return LatticePath(vals)


def thin(family: ThinnedWalkFamily, t: float) -> LatticePath:
    return family.path(t)


def retention_level(n: int, lam: float) -> float:
    """t = 1 - lambda / sqrt(n); lambda must stay within [0, sqrt(n)]."""
    if lam < 0 or lam > np.sqrt(n):
        raise ValueError(f"lambda={lam} outside [0, sqrt(n)]")
    return 1.0 - lam / np.sqrt(n)


def y_plus(family: ThinnedWalkFamily, lam: float) -> LatticePath:
    """Rescaled walk Y^{(1-lambda/sqrt n)}(n x)/sqrt(n) on x in [0, 1]."""
    n = family.n
    t = retention_level(n, lam)
    raw = family.path(t)
    return LatticePath(raw.values / np.sqrt(n), x_step=1.0 / n)


def gamma_plus(family: ThinnedWalkFamily, lam: float) -> MassVector:
    """Sorted cluster masses at time t = 1 - lambda/sqrt(n), normalised by n.

    Clusters are the ladder intervals of the thinned walk (excursions above
    the running minimum, one-unit-drop convention); masses sum to 1.
    """
    t = retention_level(family.n, lam)
    exc = excursions_above_min(family.path(t), DEFAULT_CONVENTION)
    return sorted_lengths(exc, normaliser=family.n)


def time_change_W(n: int, lam: float, rng) -> float:
    """(n - N)/sqrt(n) with N ~ Binomial(n-1, 1-lambda/sqrt(n))."""
    t = retention_level(n, lam)
    coalescences = rng.binomial(n - 1, t)
    return float((n - coalescences) / np.sqrt(n))


# ---------------------------------------------------------------------------
# Parking scheme


@dataclass(frozen=True)
class ParkingConfiguration:
    """m cars parked on the circular lot Z/nZ with rightward probing.

    Places are 1..n.  A block is a maximal run of occupied places plus the
    empty place terminating it ("cars + 1"); an empty place flanked by
    empty places is its own block of size 1.
    """

    n: int
    choices: tuple[int, ...]
    occupied: np.ndarray

    def block_sizes(self) -> list[int]:
        occ = self.occupied
        n = self.n
        if not occ.any():
            return [1] * n
        if occ.all():
            raise ValueError("parking lot is full; blocks are undefined")
        sizes = []
        # scan runs starting right after an empty place
        start = int(np.flatnonzero(~occ)[0])
        i = (start + 1) % n
        run = 0
        for _ in range(n):
            if occ[i]:
                run += 1
            else:
                sizes.append(run + 1)  # run's terminating empty place
                run = 0
            i = (i + 1) % n
        return sorted(sizes, reverse=True)


def park(n: int, m: int, rng=None, choices=None) -> ParkingConfiguration:
    """Park m cars with uniform first choices and rightward probing.

    Pass explicit 1-based `choices` to couple with a walk construction.
    """
    if m >= n:
        raise ValueError("m must be < n (at least one empty place)")
    if choices is None:
        choices = (rng.integers(1, n + 1, size=m)).tolist()
    if len(choices) != m:
        raise ValueError("need exactly m choices")
    occupied = np.zeros(n + 1, dtype=bool)  # slot 0 unused
    for ch in choices:
        spot = ch
        while occupied[spot]:
            spot = spot % n + 1
        occupied[spot] = True
    return ParkingConfiguration(n, tuple(int(c) for c in choices), occupied[1:].copy())


# ---------------------------------------------------------------------------
# Pitman's forest process


@dataclass(frozen=True)
class ForestMerge:
    time: float
    tree_i: int
    tree_j: int
    endpoint_i: int
    endpoint_j: int


@dataclass
class ForestProcess:
    """Merge history of the forest process on n labelled vertices.

    With m trees remaining the next merge fires at rate m - 1, and the pair
    (t_i, t_j) is chosen with probability (|t_i| + |t_j|) / (n (m - 1)).
    """

    n: int
    merges: list[ForestMerge]

    def tree_sizes_at(self, s: float) -> list[int]:
        sizes = {v: 1 for v in range(1, self.n + 1)}
        from .graphs import UnionFind

        uf = UnionFind(self.n)
        for ev in self.merges:
            if ev.time > s:
                break
            uf.union(ev.endpoint_i - 1, ev.endpoint_j - 1)
        roots: dict[int, int] = {}
        for v in range(self.n):
            r = uf.find(v)
            roots[r] = roots.get(r, 0) + 1
        return sorted(roots.values(), reverse=True)

    def merge_count_at(self, s: float) -> int:
        return sum(1 for ev in self.merges if ev.time <= s)


def pitman_forest(n: int, rng) -> ForestProcess:
    if n < 1:
        raise ValueError("n must be >= 1")
    trees: list[list[int]] = [[v] for v in range(1, n + 1)]
    merges: list[ForestMerge] = []
    time = 0.0
    while len(trees) > 1:
        m = len(trees)
        time += rng.exponential(1.0 / (m - 1))
        sizes = np.array([len(t) for t in trees], dtype=float)
        # P{pair {i,j}} = (s_i+s_j)/(n(m-1)): draw i by size, j uniform other
        i = int(rng.choice(m, p=sizes / n))
        j = int(rng.integers(m - 1))
        if j >= i:
            j += 1
        a = int(trees[i][rng.integers(len(trees[i]))])
        b = int(trees[j][rng.integers(len(trees[j]))])
        merges.append(ForestMerge(time, i, j, a, b))
        lo, hi = (i, j) if i < j else (j, i)
        trees[lo] = trees[lo] + trees[hi]
        del trees[hi]
    return ForestProcess(n, merges)


# ---------------------------------------------------------------------------
# Cayley trees and tree percolation


def prufer_decode(seq: list[int], n: int) -> list[tuple[int, int]]:
    """Labelled tree on 1..n from a Prufer sequence (length n-2)."""
    if n == 1:
        return []
    if n == 2:
        return [(1, 2)]
    degree = [1] * (n + 1)
    for v in seq:
        degree[v] += 1
    import heapq

    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return edges


def uniform_cayley_tree(n: int, rng, method: str = "prufer") -> list[tuple[int, int]]:
    """Uniform labelled tree on 1..n (Prufer decoding by default).

    method="aldous-broder" runs the random-walk sampler for cross-checks.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if method == "prufer":
        if n <= 2:
            return prufer_decode([], n)
        seq = (rng.integers(1, n + 1, size=n - 2)).tolist()
        return prufer_decode(seq, n)
    if method == "aldous-broder":
        visited = [False] * (n + 1)
        current = int(rng.integers(1, n + 1))
        visited[current] = True
        count = 1
        edges = []
        while count < n:
            nxt = int(rng.integers(1, n + 1))
            if nxt == current:
                continue
            if not visited[nxt]:
                visited[nxt] = True
                count += 1
                edges.append((current, nxt))
            current = nxt
        return edges
    raise ValueError(f"unknown method {method!r}")


def weighted_cayley_tree(n: int, rng, method: str = "prufer") -> ProperlyWeightedGraph:
    edges = uniform_cayley_tree(n, rng, method=method)
    w = rng.random(len(edges))
    return ProperlyWeightedGraph(n, [(u, v, float(x)) for (u, v), x in zip(edges, w)])


def percolate_cayley(n: int, t: float, rng):
    """Percolated weighted Cayley tree.

    Returns (weighted tree, Prim ordering from root 1, component sizes of
    the level graph at t sorted in decreasing order).
    """
    g = weighted_cayley_tree(n, rng)
    ordering = prim_order(g, root=1)
    from .graphs import level_components

    comps = level_components(g, t, ordering)
    sizes = sorted((len(c) for c, _ in comps), reverse=True)
    return g, ordering, sizes


def rooted_children(edges: list[tuple[int, int]], n: int, root: int = 1) -> list[list[int]]:
    """Children lists of the tree rooted at `root` (BFS orientation)."""
    adj: list[list[int]] = [[] for _ in range(n + 1)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    children: list[list[int]] = [[] for _ in range(n + 1)]
    seen = [False] * (n + 1)
    seen[root] = True
    queue = [root]
    while queue:
        v = queue.pop(0)
        for x in sorted(adj[v]):
            if not seen[x]:
                seen[x] = True
                children[v].append(x)
                queue.append(x)
    return children


def bfs_outdegrees(edges: list[tuple[int, int]], n: int, root: int = 1) -> tuple[int, ...]:
    """Out-degree sequence in breadth-first order, children by label."""
    children = rooted_children(edges, n, root)
    order = []
    queue = [root]
    while queue:
        v = queue.pop(0)
        order.append(v)
        queue.extend(children[v])
    return tuple(len(children[v]) for v in order)


def prim_thinned_outdegrees(g: ProperlyWeightedGraph, ordering: PrimOrdering, t: float) -> tuple[int, ...]:
    """X^t(i): edges of weight <= t from the i-th Prim node to its children.

    The tree is rooted at the Prim root; children point away from it.
    """
    edges = [(u, v) for u, v, _ in g.edges]
    weight = {(min(u, v), max(u, v)): w for u, v, w in g.edges}
    children = rooted_children(edges, g.n, root=ordering.order[0])
    out = []
    for v in ordering.order:
        out.append(
            sum(1 for c in children[v] if weight[(min(v, c), max(v, c))] <= t)
        )
    return tuple(out)
