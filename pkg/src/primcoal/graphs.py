"""Properly weighted graphs, Prim order and the level-set merge filtration.

A percolation system is a graph with distinct positive edge weights; its
time-t state keeps the edges of weight <= t.  Running Prim's algorithm from a
root linearises the system: every component of every level set is an interval
of consecutive Prim ranks, so the whole merge history can be tracked with a
union-find over rank intervals.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphError(ValueError):
    pass


class DuplicateWeightError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    pass


@dataclass(frozen=True)
class ProperlyWeightedGraph:
    """Graph on vertices 1..n with distinct weights in (0, 1].

    Vertices are 1-based.  Construction rejects self-loops, parallel edges,
    non-positive or duplicate weights.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]

    def __init__(self, n: int, edges: Iterable[tuple[int, int, float]]):
        norm = []
        seen_pairs = set()
        seen_weights = set()
        for u, v, w in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphError(f"vertex id out of range: ({u}, {v})")
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in seen_pairs:
                raise GraphError(f"parallel edge ({a}, {b})")
            if w <= 0.0:
                raise GraphError(f"non-positive weight {w} on edge ({a}, {b})")
            if w in seen_weights:
                raise DuplicateWeightError(f"duplicate weight {w}")
            seen_pairs.add((a, b))
            seen_weights.add(w)
            norm.append((a, b, float(w)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[tuple[int, float]]]:
        """Adjacency lists indexed 0..n (slot 0 unused)."""
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n + 1)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    @property
    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        uf = UnionFind(self.n)
        for u, v, _ in self.edges:
            uf.union(u - 1, v - 1)
        return uf.n_components == 1


@dataclass(frozen=True)
class PrimOrdering:
    """Prim order (u_1, ..., u_n) of a properly weighted connected graph.

    attach_weight[i] / attach_parent[i] describe the minimal cut edge that
    brought in u_{i+1} (both lists have length n with a None in slot 0 for
    the root).  The attach edges form the minimum spanning tree.
    """

    order: tuple[int, ...]
    attach_weight: tuple[float | None, ...]
    attach_parent: tuple[int | None, ...]

    def rank(self) -> dict[int, int]:
        """Vertex -> Prim rank (1-based)."""
        return {v: i + 1 for i, v in enumerate(self.order)}

    def mst_weight(self) -> float:
        return sum(w for w in self.attach_weight if w is not None)


def prim_order(g: ProperlyWeightedGraph, root: int = 1) -> PrimOrdering:
    """Prim order from `root` via a lazy-deletion heap over cut edges.

    O(m log m).  Raises on a disconnected graph.
    """
    if not (1 <= root <= g.n):
        raise GraphError(f"root {root} not in [1, {g.n}]")
    adj = g.adjacency()
    in_tree = [False] * (g.n + 1)
    in_tree[root] = True
    order = [root]
    attach_weight: list[float | None] = [None]
    attach_parent: list[int | None] = [None]
    heap: list[tuple[float, int, int]] = []
    for v, w in adj[root]:
        heapq.heappush(heap, (w, v, root))
    while len(order) < g.n:
        while heap and in_tree[heap[0][1]]:
            heapq.heappop(heap)
        if not heap:
            raise DisconnectedGraphError(
                f"graph disconnected: reached {len(order)} of {g.n} vertices"
            )
        w, v, parent = heapq.heappop(heap)
        in_tree[v] = True
        order.append(v)
        attach_weight.append(w)
        attach_parent.append(parent)
        for x, wx in adj[v]:
            if not in_tree[x]:
                heapq.heappush(heap, (wx, x, v))
    return PrimOrdering(tuple(order), tuple(attach_weight), tuple(attach_parent))


def prim_order_rescan(g: ProperlyWeightedGraph, root: int = 1) -> PrimOrdering:
    """Literal O(n*m) Prim order: rescan every cut edge at every step.

    Test oracle for prim_order; follows the defining minimisation verbatim.
    """
    if not (1 <= root <= g.n):
        raise GraphError(f"root {root} not in [1, {g.n}]")
    visited = {root}
    order = [root]
    attach_weight: list[float | None] = [None]
    attach_parent: list[int | None] = [None]
    while len(order) < g.n:
        best = None
        for u, v, w in g.edges:
            if (u in visited) != (v in visited):
                if best is None or w < best[0]:
                    inside, outside = (u, v) if u in visited else (v, u)
                    best = (w, outside, inside)
        if best is None:
            raise DisconnectedGraphError("graph disconnected")
        w, v, parent = best
        visited.add(v)
        order.append(v)
        attach_weight.append(w)
        attach_parent.append(parent)
    return PrimOrdering(tuple(order), tuple(attach_weight), tuple(attach_parent))


class UnionFind:
    """Union-find with path compression, union by size, per-root counters."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.n_components = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.n_components -= 1
        return True


def level_components(
    g: ProperlyWeightedGraph,
    t: float,
    ordering: PrimOrdering | None = None,
) -> list[frozenset[int]] | list[tuple[frozenset[int], tuple[int, int]]]:
    """Connected components of the level graph G_t (edges of weight <= t).

    Without an ordering, returns components as frozensets sorted by their
    smallest vertex.  With a PrimOrdering, returns (component, (a, b)) pairs
    where [a, b] is the component's interval of Prim ranks, sorted by a;
    raises if some component is not a Prim interval.
    """
    if not (0.0 <= t <= 1.0):
        raise GraphError(f"level t={t} outside [0, 1]")
    uf = UnionFind(g.n)
    for u, v, w in g.edges:
        if w <= t:
            uf.union(u - 1, v - 1)
    groups: dict[int, list[int]] = {}
    for v in range(1, g.n + 1):
        groups.setdefault(uf.find(v - 1), []).append(v)
    comps = sorted((frozenset(vs) for vs in groups.values()), key=min)
    if ordering is None:
        return comps
    rank = ordering.rank()
    out = []
    for comp in comps:
        ranks = sorted(rank[v] for v in comp)
        a, b = ranks[0], ranks[-1]
        if b - a + 1 != len(ranks):
            raise GraphError(f"component {sorted(comp)} is not a Prim interval")
        out.append((comp, (a, b)))
    out.sort(key=lambda item: item[1][0])
    return out


@dataclass(frozen=True)
class MergeEvent:
    """One coalescence: the two Prim-rank intervals joined at time `time`."""

    time: float
    left: tuple[int, int]
    right: tuple[int, int]


@dataclass
class ComponentFiltration:
    """Full merge history of a percolation system in Prim-rank coordinates.

    merge_events are chronological; internal_edges lists (time, rank_u,
    rank_v) for the edges that closed a cycle (they raise a component's
    excess instead of merging).
    """

    n: int
    ordering: PrimOrdering
    merge_events: list[MergeEvent] = field(default_factory=list)
    internal_edges: list[tuple[float, int, int]] = field(default_factory=list)

    def components_at(self, t: float) -> list[tuple[tuple[int, int], int, int]]:
        """State at level t: list of (rank interval, size, excess)."""
        uf = UnionFind(self.n)
        edge_count = [0] * self.n
        lo = list(range(self.n))
        hi = list(range(self.n))
        for ev in self.merge_events:
            if ev.time > t:
                break
            ra = uf.find(ev.left[0] - 1)
            rb = uf.find(ev.right[0] - 1)
            merged_lo = min(lo[ra], lo[rb])
            merged_hi = max(hi[ra], hi[rb])
            edges = edge_count[ra] + edge_count[rb] + 1
            uf.union(ra, rb)
            root = uf.find(ra)
            lo[root], hi[root] = merged_lo, merged_hi
            edge_count[root] = edges
        for time, ru, rv in self.internal_edges:
            if time <= t:
                edge_count[uf.find(ru - 1)] += 1
        out = []
        seen = set()
        for r in range(self.n):
            root = uf.find(r)
            if root in seen:
                continue
            seen.add(root)
            size = uf.size[root]
            excess = edge_count[root] - size + 1
            out.append(((lo[root] + 1, hi[root] + 1), size, excess))
        out.sort()
        return out


def component_filtration(
    g: ProperlyWeightedGraph, ordering: PrimOrdering
) -> ComponentFiltration:
    """Replay all edges in weight order through a union-find on Prim ranks.

    Every merge event must join adjacent rank intervals (the Prim-interval
    property); a violation raises GraphError.
    """
    rank = ordering.rank()
    filt = ComponentFiltration(n=g.n, ordering=ordering)
    uf = UnionFind(g.n)
    lo = list(range(g.n))
    hi = list(range(g.n))
    for u, v, w in sorted(g.edges, key=lambda e: e[2]):
        ra = uf.find(rank[u] - 1)
        rb = uf.find(rank[v] - 1)
        if ra == rb:
            filt.internal_edges.append((w, rank[u], rank[v]))
            continue
        ia = (lo[ra] + 1, hi[ra] + 1)
        ib = (lo[rb] + 1, hi[rb] + 1)
        left, right = (ia, ib) if ia[0] < ib[0] else (ib, ia)
        if left[1] + 1 != right[0]:
            raise GraphError(
                f"merge of non-adjacent Prim intervals {left} and {right} at t={w}"
            )
        merged_lo = min(lo[ra], lo[rb])
        merged_hi = max(hi[ra], hi[rb])
        uf.union(ra, rb)
        root = uf.find(ra)
        lo[root], hi[root] = merged_lo, merged_hi
        filt.merge_events.append(MergeEvent(w, left, right))
    return filt


def mst_weight_kruskal(g: ProperlyWeightedGraph) -> float:
    """Independent MST total weight (sort edges + union-find)."""
    uf = UnionFind(g.n)
    total = 0.0
    for u, v, w in sorted(g.edges, key=lambda e: e[2]):
        if uf.union(u - 1, v - 1):
            total += w
    if uf.n_components != 1:
        raise DisconnectedGraphError("graph disconnected")
    return total


def random_complete_graph(n, rng) -> ProperlyWeightedGraph:
    """Dense K_n with i.i.d. uniform (0, 1] weights.

    Materialising K_n is refused for n > 4096; use the sparse sampler in
    `primcoal.multiplicative` for larger graphs.
    """
    if n > 4096:
        raise GraphError("dense K_n refused for n > 4096; use the sparse sampler")
    m = n * (n - 1) // 2
    while True:
        w = rng.random(m)
        if len(set(w.tolist())) == m and (w > 0).all():
            break
    edges = []
    k = 0
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            edges.append((u, v, float(w[k])))
            k += 1
    return ProperlyWeightedGraph(n, edges)


def write_edge_list(g: ProperlyWeightedGraph, path) -> None:
    """Serialise as 'n m' header plus one 'u v w' line per edge."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v, w in g.edges:
            fh.write(f"{u} {v} {w!r}\n")


def read_edge_list(path) -> ProperlyWeightedGraph:
    with open(path) as fh:
        header = fh.readline().split()
        n, m = int(header[0]), int(header[1])
        edges = []
        for _ in range(m):
            parts = fh.readline().split()
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
    return ProperlyWeightedGraph(n, edges)
