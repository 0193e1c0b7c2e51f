"""Independent reference implementations used only to check the library.

Everything here is deliberately written the slow, obvious way (Bellman-Ford,
Floyd-Warshall, exhaustive scans) so that test expectations never depend on
the code under test.
"""

import math

INF = math.inf


def bellman_ford(g, source):
    """O(n*m) relaxation loop; returns list of distances from source."""
    dist = [INF] * g.n
    dist[source] = 0.0
    for _ in range(g.n - 1):
        changed = False
        for u, v, w in g.edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
            if dist[v] + w < dist[u]:
                dist[u] = dist[v] + w
                changed = True
        if not changed:
            break
    return dist


def floyd_warshall(g):
    """O(n^3) all-pairs matrix."""
    n = g.n
    d = [[INF] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0.0
    for u, v, w in g.edges:
        if w < d[u][v]:
            d[u][v] = w
            d[v][u] = w
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return d


def nearest_by_scan(g, s):
    """Per-member Bellman-Ford, then an explicit argmin with smallest-id ties."""
    per = {x: bellman_ford(g, x) for x in sorted(set(s))}
    h = []
    p = []
    for u in range(g.n):
        best_d, best_x = INF, -1
        for x in sorted(per):
            d = per[x][u]
            if d < best_d:
                best_d, best_x = d, x
        h.append(best_d)
        p.append(best_x)
    return h, p
