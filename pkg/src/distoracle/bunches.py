"""Level hierarchies and bunch-table distance oracles.

The classic construction: sample a nested ladder of vertex sets, record for
every vertex its nearest member of each level (pivot) and the exact distances
to every sampled vertex that is closer than the next level, then answer
queries by walking the ladder and swapping endpoints until a pivot lands in
the other side's bunch.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

from .graphs import Graph, nearest_in_set, sample_subset

INF = math.inf


@dataclass
class Levels:
    """Nested vertex sets A_0 >= A_1 >= ... (all non-empty, sorted lists)."""

    k: int
    sets: list[list[int]]

    def level_of(self, n: int) -> list[int]:
        """Deepest level containing each vertex (0 for everyone, since A_0 = V)."""
        lvl = [0] * n
        for i, s in enumerate(self.sets):
            for v in s:
                lvl[v] = i
        return lvl


def build_levels(n: int, k: int, rng) -> Levels:
    """Sample the classic ladder: A_0 = V, each next level kept w.p. n^(-1/k).

    Levels are guaranteed non-empty: the sampler never returns an empty set,
    and as a final guard an empty level would be repaired by promoting one
    uniformly chosen vertex from the level below.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    if k < 1:
        raise ValueError("k must be >= 1")
    sets = [list(range(n))]
    rate = n ** (-1.0 / k)
    for _ in range(1, k):
        prev = sets[-1]
        target = max(min(len(prev) * rate, float(len(prev))), 1e-9)
        level = sample_subset(prev, target, rng)
        if not level:  # defensive; sample_subset always returns >= 1 element
            level = [prev[rng.randrange(len(prev))]]
        sets.append(level)
    return Levels(k=k, sets=sets)


@dataclass
class QueryCounter:
    """Counts bunch-dictionary probes made by queries."""

    lookups: int = 0


@dataclass
class BunchOracle:
    """Distance oracle backed by pivot tables and per-vertex bunch dictionaries.

    mode is one of "classic" (levels sampled from the whole vertex set),
    "parameterized" (level 1 is a given set S, singleton level-0 bunches) or
    "restricted" (a parameterized oracle projected onto S; only members of S
    retain tables and may be queried).

    pivots[i][u] / hs[i][u]: nearest level-i vertex and its distance (-1 / inf
    when level i misses u's component). bunch[u] maps each sampled vertex w to
    the exact distance d(u, w), stored only when w is closer to u than u's
    next-level pivot beyond w's own level.
    """

    mode: str
    k: int
    n: int
    levels: Levels
    pivots: list[list[int]]
    hs: list[list[float]]
    bunch: list[dict[int, float]]
    s_set: list[int] | None = None
    seed: int = 0
    relaxations: int = 0
    phase_ms: dict[str, float] = field(default_factory=dict)

    @property
    def num_levels(self) -> int:
        return len(self.levels.sets)

    def total_entries(self) -> int:
        return sum(len(b) for b in self.bunch)


def _grow_cluster(adj, center: int, next_h: list[float]):
    """Truncated Dijkstra from `center`, pruned at each vertex's next-level radius.

    Returns [(vertex, exact distance)] for the cluster
    {u : d(center, u) < next_h[u]}. Pruning at push is exact because every
    vertex on a shortest path to a cluster member is itself in the cluster.
    """
    dist = {center: 0.0}
    heap = [(0.0, center)]
    out = []
    relaxations = 0
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        if d >= next_h[u]:
            continue  # only the seed can hit this; pushes are pre-pruned
        out.append((u, d))
        for v, w in adj[u]:
            nd = d + w
            relaxations += 1
            if nd < next_h[v] and nd < dist.get(v, INF):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return out, relaxations


def _build_tables(g: Graph, levels: Levels, skip_level_zero: bool):
    """Shared builder for classic and parameterized bunch tables."""
    n = g.n
    num = len(levels.sets)
    t0 = time.perf_counter()
    infos = [nearest_in_set(g, s) for s in levels.sets]
    pivots = [info.p for info in infos]
    hs = [info.h for info in infos]
    t1 = time.perf_counter()

    member_of_next: list[set] = [set(levels.sets[i + 1]) for i in range(num - 1)]
    member_of_next.append(set())
    top_inf = [INF] * n
    bunch: list[dict[int, float]] = [dict() for _ in range(n)]
    relaxations = 0
    for i in range(num):
        if i == 0 and skip_level_zero:
            for u in range(n):
                bunch[u][u] = 0.0
            continue
        next_h = hs[i + 1] if i + 1 < num else top_inf
        nxt = member_of_next[i]
        for w in levels.sets[i]:
            if w in nxt:
                continue  # w's cluster is grown at its own (deeper) level
            cluster, rel = _grow_cluster(g.adj, w, next_h)
            relaxations += rel
            for u, d in cluster:
                bunch[u][w] = d
    t2 = time.perf_counter()
    phase_ms = {"pivots": (t1 - t0) * 1e3, "clusters": (t2 - t1) * 1e3}
    return pivots, hs, bunch, relaxations, phase_ms


def build_bunches(g: Graph, levels: Levels) -> BunchOracle:
    """Construct the classic bunch oracle for a prepared level ladder."""
    if any(not s for s in levels.sets):
        raise ValueError("levels must be non-empty")
    pivots, hs, bunch, relaxations, phase_ms = _build_tables(g, levels, skip_level_zero=False)
    return BunchOracle(
        mode="classic",
        k=levels.k,
        n=g.n,
        levels=levels,
        pivots=pivots,
        hs=hs,
        bunch=bunch,
        relaxations=relaxations,
        phase_ms=phase_ms,
    )


def tz_query(o: BunchOracle, u: int, v: int, counter: QueryCounter | None = None) -> float:
    """Estimate d(u, v): best of the ladder walk run from both endpoints.

    At iteration i with current endpoints (x, y), the level-i pivot of x is
    accepted only if its stored distance at y is below y's level-(i+1) radius
    (that is the membership test for the level-i bunch, not just presence in
    the flattened dictionary -- presence alone can accept a far top-level
    vertex early and break the 2*min(h)+d refinement). On failure the
    endpoints swap. inf means u and v are disconnected.
    """
    if not (0 <= u < o.n and 0 <= v < o.n):
        raise ValueError(f"query vertices outside 0..{o.n - 1}")
    if u == v:
        return 0.0
    pivots, hs, bunch = o.pivots, o.hs, o.bunch
    num = len(hs)
    best = INF
    for x, y in ((u, v), (v, u)):
        for i in range(num):
            w = pivots[i][x]
            if w >= 0:
                if counter is not None:
                    counter.lookups += 1
                dv = bunch[y].get(w)
                if dv is not None and (i + 1 == num or dv < hs[i + 1][y]):
                    cand = hs[i][x] + dv
                    if cand < best:
                        best = cand
                    break
            x, y = y, x
    return best
