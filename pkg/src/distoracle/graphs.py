"""Graph container, shortest-path primitives, and set-restriction helpers."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

INF = math.inf


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed."""


@dataclass
class Graph:
    """Undirected graph with non-negative edge weights, vertices 0..n-1.

    Parallel edges are collapsed to the minimum weight and self-loops are
    dropped at construction time, so `edges` is canonical: one entry per
    unordered pair, u < v, sorted.
    """

    n: int
    edges: list[tuple[int, int, float]]
    adj: list[list[tuple[int, float]]] = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, raw_edges) -> "Graph":
        if n < 0:
            raise GraphFormatError("vertex count must be non-negative")
        best: dict[tuple[int, int], float] = {}
        for u, v, w in raw_edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u},{v}) has endpoint outside 0..{n - 1}")
            if w < 0:
                raise GraphFormatError(f"edge ({u},{v}) has negative weight {w}")
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            w = float(w)
            old = best.get(key)
            if old is None or w < old:
                best[key] = w
        edges = [(u, v, w) for (u, v), w in sorted(best.items())]
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for u, v, w in edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return cls(n=n, edges=edges, adj=adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def is_unweighted(self) -> bool:
        return all(w == 1.0 for _, _, w in self.edges)


def load_graph(text: str) -> Graph:
    """Parse the line-oriented graph format.

    Header `p sp <n> <m>`, one `e <u> <v> [<w>]` line per edge with 1-based
    vertex ids (weight omitted means 1), `c ...` comment lines anywhere.
    """
    n = None
    raw: list[tuple[int, int, float]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "sp":
                raise GraphFormatError(f"line {lineno}: malformed problem line {line!r}")
            try:
                n = int(parts[2])
                int(parts[3])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: malformed problem line {line!r}") from None
        elif parts[0] == "e":
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before problem line")
            if len(parts) not in (3, 4):
                raise GraphFormatError(f"line {lineno}: malformed edge line {line!r}")
            try:
                u = int(parts[1])
                v = int(parts[2])
                w = float(parts[3]) if len(parts) == 4 else 1.0
            except ValueError:
                raise GraphFormatError(f"line {lineno}: malformed edge line {line!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"line {lineno}: vertex id outside 1..{n}")
            if w < 0 or math.isnan(w) or math.isinf(w):
                raise GraphFormatError(f"line {lineno}: bad edge weight {parts[3]!r}")
            raw.append((u - 1, v - 1, w))
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphFormatError("missing problem line")
    return Graph.from_edges(n, raw)


def _format_weight(w: float) -> str:
    if w == int(w):
        return str(int(w))
    return repr(w)


def dumps_graph(g: Graph, comments: tuple[str, ...] = ()) -> str:
    """Serialize back to the `p sp` text format (1-based ids)."""
    out = [f"c {c}" for c in comments]
    out.append(f"p sp {g.n} {g.m}")
    for u, v, w in g.edges:
        out.append(f"e {u + 1} {v + 1} {_format_weight(w)}")
    return "\n".join(out) + "\n"


@dataclass
class DistanceMap:
    """Single-source shortest-path result."""

    source: int
    dist: list[float]
    parent: list[int | None]


def dijkstra(g: Graph, source: int, restrict=None) -> DistanceMap:
    """Binary-heap Dijkstra from `source`.

    `restrict`, if given, is a predicate (u, v, w) -> bool deciding whether an
    edge may be traversed (checked in both directions with the endpoints in
    traversal order). Unreachable vertices get dist inf, parent None.
    """
    if not (0 <= source < g.n):
        raise ValueError(f"source {source} outside 0..{g.n - 1}")
    dist = [INF] * g.n
    parent: list[int | None] = [None] * g.n
    dist[source] = 0.0
    heap = [(0.0, source)]
    adj = g.adj
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            if restrict is not None and not restrict(u, v, w):
                continue
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
    return DistanceMap(source=source, dist=dist, parent=parent)


@dataclass
class NearestInfo:
    """Distance and witness to the nearest member of a vertex set S.

    h[u] = d(u, S) (inf when S misses u's component), p[u] = the witness
    vertex in S, ties broken toward the smaller vertex id, -1 if unreachable.
    """

    set_members: list[int]
    h: list[float]
    p: list[int]


def nearest_in_set(g: Graph, s: list[int]) -> NearestInfo:
    """Multi-source Dijkstra over S with lexicographic (dist, witness) keys.

    Relaxing on the pair (distance, witness id) instead of distance alone
    makes the tie-break deterministic: p[u] is the smallest-id vertex among
    all members of S at minimum distance from u.
    """
    members = sorted(set(s))
    if not members:
        raise ValueError("set must be non-empty")
    for x in members:
        if not (0 <= x < g.n):
            raise ValueError(f"set member {x} outside 0..{g.n - 1}")
    h = [INF] * g.n
    p = [-1] * g.n
    in_set = [False] * g.n
    heap = []
    for x in members:
        h[x] = 0.0
        p[x] = x
        in_set[x] = True
        heap.append((0.0, x, x))
    heapq.heapify(heap)
    adj = g.adj
    while heap:
        d, piv, u = heapq.heappop(heap)
        if (d, piv) != (h[u], p[u]):
            continue
        for v, w in adj[u]:
            if in_set[v]:
                # members always witness themselves (relevant only for
                # zero-weight ties; h[v] = 0 cannot improve)
                continue
            nd = d + w
            if nd < h[v] or (nd == h[v] and piv < p[v]):
                h[v] = nd
                p[v] = piv
                heapq.heappush(heap, (nd, piv, v))
    return NearestInfo(set_members=members, h=h, p=p)


def restricted_graph(g: Graph, info: NearestInfo) -> Graph:
    """Subgraph keeping edge (u,v,w) iff w <= max(h[u], h[v]).

    This is the union of all shortest-path trees toward S: any edge on a
    shortest path from some vertex to its nearest S-member survives.
    """
    h = info.h
    kept = [(u, v, w) for u, v, w in g.edges if w <= h[u] or w <= h[v]]
    return Graph.from_edges(g.n, kept)


@dataclass
class Ball:
    """Open ball around `center`: vertices strictly closer than d(center, S)."""

    center: int
    members: dict[int, float]


def ball(g: Graph, u: int, info: NearestInfo) -> Ball:
    """Truncated Dijkstra: members = {v : d(u,v) < h[u]} with exact distances.

    Pushes are pruned at radius h[u]; since every vertex on a shortest path to
    a ball member is itself in the ball, pruning never loses a member.
    """
    radius = info.h[u]
    members: dict[int, float] = {}
    if radius <= 0:
        return Ball(center=u, members=members)
    members[u] = 0.0
    heap = [(0.0, u)]
    adj = g.adj
    while heap:
        d, x = heapq.heappop(heap)
        if d > members.get(x, INF):
            continue
        for y, w in adj[x]:
            nd = d + w
            if nd < radius and nd < members.get(y, INF):
                members[y] = nd
                heapq.heappush(heap, (nd, y))
    return Ball(center=u, members=members)


def sample_subset(universe, target_size: float, rng) -> list[int]:
    """Independent sampling of `universe` at rate target_size/|universe|.

    Retries (up to 32 times) until the sample size lands within a factor two
    of the target; after that, falls back to an exact uniform sample of
    round(target_size) elements (clamped to at least one). Returns a sorted
    list. Deterministic for a given rng state.
    """
    pool = sorted(set(universe))
    if not pool:
        raise ValueError("cannot sample from an empty universe")
    if not 0 < target_size <= len(pool):
        raise ValueError(f"target size {target_size} outside (0, {len(pool)}]")
    p = target_size / len(pool)
    if p >= 1.0:
        return list(pool)
    lo = target_size / 2.0
    hi = target_size * 2.0
    for _ in range(32):
        picked = [x for x in pool if rng.random() < p]
        if lo <= len(picked) <= hi:
            return picked
    size = min(len(pool), max(1, round(target_size)))
    return sorted(rng.sample(pool, size))
