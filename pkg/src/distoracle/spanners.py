"""Cluster-growing graph spanners.

One machinery drives both variants: k-1 rounds of cluster sampling and
merging followed by a final joining phase. On weighted graphs it yields the
classic multiplicative (2k-1)-spanner; specialized to unit weights (where the
"strictly lighter cluster" rule is vacuous) it yields a spanner with
multiplicative stretch k and additive surplus k-1, which is what the
unweighted composite constructions rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graphs import Graph, NearestInfo

INF = math.inf


@dataclass
class SpannerResult:
    """A spanner subgraph plus the guarantee it was built for.

    additive is 0 for the weighted variant and k-1 for the unit-weight one.
    edge_budget is the size bound the builder aimed for; over_budget records
    that the final attempt still exceeded it (after `retries` rebuilds).
    augmented marks that set-pivot edges were added, after which the spanner
    is no longer a subgraph of the input.
    """

    h: Graph
    k_spanner: int
    additive: int
    edge_budget: float
    retries: int = 0
    over_budget: bool = False
    augmented: bool = False


def _cluster_spanner(g: Graph, k: int, rng) -> Graph:
    """One full run of the clustering construction; returns the spanner graph."""
    n = g.n
    live: list[dict[int, float]] = [dict(g.adj[u]) for u in range(n)]
    cluster = list(range(n))  # cluster id per vertex, -1 once the vertex exits
    spanner: dict[tuple[int, int], float] = {}

    def add_edge(u: int, v: int, w: float) -> None:
        key = (u, v) if u < v else (v, u)
        old = spanner.get(key)
        if old is None or w < old:
            spanner[key] = w

    def drop_all_edges(u: int) -> None:
        for v in live[u]:
            del live[v][u]
        live[u].clear()

    def drop_edges_into(u: int, cid: int) -> None:
        for v in [v for v in live[u] if cluster[v] == cid]:
            del live[v][u]
            del live[u][v]

    prob = n ** (-1.0 / k)
    for _ in range(k - 1):
        ids = sorted({c for c in cluster if c != -1})
        sampled = {c for c in ids if rng.random() < prob}
        new_cluster = cluster[:]
        for u in range(n):
            cu = cluster[u]
            if cu == -1 or cu in sampled:
                continue
            # lightest edge per adjacent cluster, ties toward the smaller
            # neighbor id; decisions use the clustering from the round start
            groups: dict[int, tuple[float, int]] = {}
            for v, w in live[u].items():
                cv = cluster[v]
                if cv == -1 or cv == cu:
                    continue
                cand = (w, v)
                if cv not in groups or cand < groups[cv]:
                    groups[cv] = cand
            if not groups:
                new_cluster[u] = -1
                drop_all_edges(u)
                continue
            sampled_adj = {c: wv for c, wv in groups.items() if c in sampled}
            if not sampled_adj:
                # exit: keep one lightest edge per adjacent cluster
                for c in sorted(groups):
                    w, v = groups[c]
                    add_edge(u, v, w)
                new_cluster[u] = -1
                drop_all_edges(u)
            else:
                cstar, (wstar, vstar) = min(
                    sampled_adj.items(), key=lambda it: (it[1], it[0])
                )
                add_edge(u, vstar, wstar)
                new_cluster[u] = cstar
                for c in sorted(groups):
                    if c == cstar:
                        continue
                    w, v = groups[c]
                    if (w, v) < (wstar, vstar):
                        add_edge(u, v, w)
                        drop_edges_into(u, c)
                drop_edges_into(u, cstar)
        cluster = new_cluster
        # discard edges that ended up inside a single cluster; the cluster
        # tree built from join edges covers them
        for u in range(n):
            cu = cluster[u]
            if cu == -1:
                continue
            for v in [v for v in live[u] if u < v and cluster[v] == cu]:
                del live[v][u]
                del live[u][v]

    # final phase: every still-clustered vertex keeps one lightest edge into
    # each adjacent surviving cluster
    for u in range(n):
        cu = cluster[u]
        if cu == -1:
            continue
        groups = {}
        for v, w in live[u].items():
            cv = cluster[v]
            if cv == -1 or cv == cu:
                continue
            cand = (w, v)
            if cv not in groups or cand < groups[cv]:
                groups[cv] = cand
        for c in sorted(groups):
            w, v = groups[c]
            add_edge(u, v, w)

    return Graph.from_edges(n, [(u, v, w) for (u, v), w in sorted(spanner.items())])


def _build_with_retries(g: Graph, k: int, rng, additive: int) -> SpannerResult:
    budget = 10.0 * g.n ** (1.0 + 1.0 / k)
    h = _cluster_spanner(g, k, rng)
    retries = 0
    while h.m > budget and retries < 8:
        retries += 1
        h = _cluster_spanner(g, k, rng)
    return SpannerResult(
        h=h,
        k_spanner=k,
        additive=additive,
        edge_budget=budget,
        retries=retries,
        over_budget=h.m > budget,
    )


def baswana_sen_spanner(g: Graph, k: int, rng) -> SpannerResult:
    """Multiplicative (2k-1)-spanner with an expected n^(1+1/k) edges."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return _build_with_retries(g, k, rng, additive=0)


def bkmp_spanner_unweighted(g: Graph, k: int, rng) -> SpannerResult:
    """(k, k-1)-spanner of an unweighted graph: d_H <= k*d + (k-1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not g.is_unweighted():
        raise ValueError("this spanner variant requires unit edge weights")
    return _build_with_retries(g, k, rng, additive=k - 1)


def augment_with_pivots(sp: SpannerResult, nearest: NearestInfo) -> SpannerResult:
    """Add one edge (u, p[u]) of weight h[u] per vertex with a reachable pivot.

    The result is no longer a subgraph of the original graph, but each added
    edge corresponds to a real shortest path, so spanner distances stay
    realizable. Self-edges (u in S) and unreachable pivots are skipped.
    """
    edges = list(sp.h.edges)
    for u in range(sp.h.n):
        pu = nearest.p[u]
        if pu >= 0 and pu != u:
            edges.append((u, pu, nearest.h[u]))
    return SpannerResult(
        h=Graph.from_edges(sp.h.n, edges),
        k_spanner=sp.k_spanner,
        additive=sp.additive,
        edge_budget=sp.edge_budget,
        retries=sp.retries,
        over_budget=sp.over_budget,
        augmented=True,
    )
