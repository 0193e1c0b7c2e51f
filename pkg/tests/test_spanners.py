import math
import random

import pytest

from distoracle.graphs import Graph, nearest_in_set
from distoracle.spanners import (
    augment_with_pivots,
    baswana_sen_spanner,
    bkmp_spanner_unweighted,
)

from reference import floyd_warshall
from test_graphs import random_graph

INF = math.inf


def unit_graph(g):
    return Graph.from_edges(g.n, [(u, v, 1.0) for u, v, _ in g.edges])


def random_tree(n, seed):
    rng = random.Random(seed)
    edges = [(i, rng.randrange(i), rng.randint(1, 9)) for i in range(1, n)]
    return Graph.from_edges(n, edges)


def test_k1_returns_the_input_graph():
    g = random_graph(30, 80, seed=0)
    sp = baswana_sen_spanner(g, 1, random.Random(1))
    assert sp.h.edges == g.edges
    gu = unit_graph(g)
    spu = bkmp_spanner_unweighted(gu, 1, random.Random(1))
    assert spu.h.edges == gu.edges
    assert spu.additive == 0


def test_tree_input_comes_back_unchanged():
    # every tree edge is a bridge, so any finite-stretch spanner keeps all
    for seed in range(4):
        g = random_tree(40, seed)
        sp = baswana_sen_spanner(g, 3, random.Random(seed + 10))
        assert sp.h.edges == g.edges


def test_spanner_is_subgraph_with_original_weights():
    g = random_graph(70, 250, seed=5)
    sp = baswana_sen_spanner(g, 3, random.Random(2))
    g_edges = set(g.edges)
    assert all(e in g_edges for e in sp.h.edges)
    assert not sp.augmented


@pytest.mark.parametrize("k", [2, 3])
def test_weighted_stretch_exhaustive(k):
    for seed in (0, 1, 2):
        g = random_graph(80, 240, seed=seed)
        sp = baswana_sen_spanner(g, k, random.Random(seed + 7))
        dg = floyd_warshall(g)
        dh = floyd_warshall(sp.h)
        for u in range(g.n):
            for v in range(u + 1, g.n):
                assert dh[u][v] <= (2 * k - 1) * dg[u][v]


def test_cycle_c6_additive_guarantee():
    c6 = Graph.from_edges(6, [(i, (i + 1) % 6, 1) for i in range(6)])
    sp = bkmp_spanner_unweighted(c6, 2, random.Random(3))
    dg = floyd_warshall(c6)
    dh = floyd_warshall(sp.h)
    for u in range(6):
        for v in range(6):
            assert dh[u][v] <= 2 * dg[u][v] + 1


@pytest.mark.parametrize("k", [2, 3, 5])
def test_unweighted_stretch_exhaustive(k):
    for seed in (0, 1):
        g = unit_graph(random_graph(60, 200, seed=seed))
        sp = bkmp_spanner_unweighted(g, k, random.Random(seed + 31))
        dg = floyd_warshall(g)
        dh = floyd_warshall(sp.h)
        for u in range(g.n):
            for v in range(u + 1, g.n):
                assert dh[u][v] <= k * dg[u][v] + (k - 1)


def test_unweighted_medium_graph_additive_k3():
    g = unit_graph(random_graph(500, 3000, seed=9))
    sp = bkmp_spanner_unweighted(g, 3, random.Random(41))
    import numpy as np
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra as sp_dijkstra

    def apsp(graph):
        rows = [u for u, v, _ in graph.edges] + [v for u, v, _ in graph.edges]
        cols = [v for u, v, _ in graph.edges] + [u for u, v, _ in graph.edges]
        dat = [w for _, _, w in graph.edges] * 2
        return sp_dijkstra(csr_matrix((dat, (rows, cols)), shape=(graph.n, graph.n)))

    dg = apsp(g)
    dh = apsp(sp.h)
    assert bool(np.all(dh <= 3 * dg + 2 + 1e-9))
    assert sp.h.m <= sp.edge_budget


def test_bkmp_rejects_weighted_input():
    g = Graph.from_edges(3, [(0, 1, 2), (1, 2, 1)])
    with pytest.raises(ValueError):
        bkmp_spanner_unweighted(g, 2, random.Random(0))


def test_budget_fields():
    g = random_graph(100, 400, seed=1)
    sp = baswana_sen_spanner(g, 2, random.Random(5))
    assert sp.edge_budget == 10.0 * 100 ** 1.5
    assert sp.h.m <= sp.edge_budget
    assert sp.retries == 0 and not sp.over_budget
    assert sp.k_spanner == 2


def test_determinism():
    g = random_graph(90, 350, seed=6)
    a = baswana_sen_spanner(g, 3, random.Random(12))
    b = baswana_sen_spanner(g, 3, random.Random(12))
    assert a.h.edges == b.h.edges


def test_augment_with_pivots():
    g = random_graph(50, 140, seed=8)
    s = [4, 23, 37]
    info = nearest_in_set(g, s)
    sp = baswana_sen_spanner(g, 2, random.Random(9))
    aug = augment_with_pivots(sp, info)
    assert aug.augmented
    dh = floyd_warshall(aug.h)
    for u in range(g.n):
        if info.p[u] >= 0:
            assert dh[u][info.p[u]] <= info.h[u]
    # no self loops were introduced
    assert all(u != v for u, v, _ in aug.h.edges)
    # augmented distances are still realizable (never below true distance)
    dg = floyd_warshall(g)
    for u in range(g.n):
        for v in range(g.n):
            assert dh[u][v] >= dg[u][v] - 1e-9
