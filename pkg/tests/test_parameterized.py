import math
import random

import pytest

from distoracle.bunches import QueryCounter
from distoracle.parameterized import (
    ado_p_query,
    ado_pprime_query,
    build_ado_p,
    build_ado_pprime,
)

from reference import floyd_warshall
from test_graphs import random_graph

INF = math.inf


def test_levels_start_with_v_then_s():
    g = random_graph(60, 150, seed=0)
    s = [3, 10, 25, 40, 55]
    o = build_ado_p(g, 3, s, random.Random(1))
    sets = o.oracle.levels.sets
    assert len(sets) == 4  # A_0..A_3
    assert sets[0] == list(range(60))
    assert sets[1] == s
    rate = len(s) ** (-1 / 3)
    for i in (2, 3):
        assert set(sets[i]) <= set(sets[i - 1])
        assert len(sets[i]) >= 1
        if len(sets[i - 1]) > 1:
            target = len(sets[i - 1]) * rate
            assert target / 2 <= len(sets[i]) <= 2 * target


def test_level_zero_stores_identity_only():
    g = random_graph(40, 100, seed=3)
    s = [0, 7, 19]
    o = build_ado_p(g, 2, s, random.Random(5))
    lvl = o.oracle.levels.level_of(g.n)
    for u in range(g.n):
        assert o.oracle.bunch[u][u] == 0.0
        # every other stored vertex belongs to S or deeper
        for w in o.oracle.bunch[u]:
            assert w == u or lvl[w] >= 1


def test_nearest_field_matches_level_one():
    g = random_graph(30, 70, seed=8)
    s = [2, 9, 28]
    o = build_ado_p(g, 2, s, random.Random(0))
    assert o.nearest.set_members == sorted(s)
    assert o.nearest.h is o.oracle.hs[1]
    assert o.nearest.p is o.oracle.pivots[1]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_bound_exhaustive_small(k):
    for seed in (0, 1):
        g = random_graph(50, 130, seed=seed)
        s = sorted(random.Random(seed).sample(range(50), 8))
        o = build_ado_p(g, k, s, random.Random(seed + 50))
        exact = floyd_warshall(g)
        h = o.nearest.h
        for u in range(g.n):
            for v in range(g.n):
                est = ado_p_query(o, u, v)
                d = exact[u][v]
                assert d <= est
                assert est <= 2 * min(h[u], h[v]) + (2 * k - 1) * d


def test_singleton_s():
    g = random_graph(25, 60, seed=2)
    o = build_ado_p(g, 3, [11], random.Random(7))
    exact = floyd_warshall(g)
    for u in range(g.n):
        for v in range(g.n):
            est = ado_p_query(o, u, v)
            bound = 2 * min(exact[u][11], exact[v][11]) + 5 * exact[u][v]
            assert exact[u][v] <= est <= bound


def test_query_counter_at_most_k_plus_one_per_direction():
    g = random_graph(40, 110, seed=5)
    k = 3
    o = build_ado_p(g, k, [4, 18, 31], random.Random(2))
    for u in range(0, 40, 7):
        for v in range(3, 40, 9):
            c = QueryCounter()
            ado_p_query(o, u, v, counter=c)
            assert c.lookups <= 2 * (k + 1)


def test_rejects_bad_s():
    g = random_graph(10, 15, seed=1)
    with pytest.raises(ValueError):
        build_ado_p(g, 2, [], random.Random(0))
    with pytest.raises(ValueError):
        build_ado_p(g, 2, [10], random.Random(0))
    with pytest.raises(ValueError):
        build_ado_p(g, 0, [1], random.Random(0))


def test_pprime_agrees_with_full_oracle_on_s():
    g = random_graph(60, 170, seed=9)
    s = sorted(random.Random(9).sample(range(60), 10))
    full = build_ado_p(g, 2, s, random.Random(77))
    proj = build_ado_pprime(g, 2, s, random.Random(77))
    for s1 in s:
        for s2 in s:
            assert ado_pprime_query(proj, s1, s2) == ado_p_query(full, s1, s2)


def test_pprime_multiplicative_stretch_on_s():
    g = random_graph(70, 200, seed=4)
    s = sorted(random.Random(4).sample(range(70), 12))
    k = 2
    proj = build_ado_pprime(g, k, s, random.Random(6))
    exact = floyd_warshall(g)
    for s1 in s:
        for s2 in s:
            est = ado_pprime_query(proj, s1, s2)
            assert exact[s1][s2] <= est <= (2 * k - 1) * exact[s1][s2] or s1 == s2


def test_pprime_rejects_outside_s():
    g = random_graph(20, 40, seed=0)
    proj = build_ado_pprime(g, 2, [1, 5, 9], random.Random(3))
    with pytest.raises(ValueError):
        ado_pprime_query(proj, 0, 5)


def test_pprime_keeps_tables_only_for_s():
    g = random_graph(30, 80, seed=6)
    s = [0, 4, 8, 12]
    proj = build_ado_pprime(g, 2, s, random.Random(1))
    for v in range(g.n):
        if v not in s:
            assert proj.oracle.bunch[v] == {}
        else:
            assert proj.oracle.bunch[v]
    assert proj.total_entries() == sum(len(proj.oracle.bunch[x]) for x in s)
