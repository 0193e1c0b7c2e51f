"""Acceptance suite: one test per shipped guarantee.

Each test is a complete, independently runnable check of one advertised
property, at the scale and tolerance the guarantee is stated for:

1. weighted constructions: zero stretch violations, exhaustive, 5 seeds per
   builder/k pair on G(n=300..400, m=4n..15n)
2. unweighted constructions: zero additive-stretch violations at the same scale
3. component lemmas (parameterized bound, layered-query bound, far-path
   inequalities), exhaustive at small n
4. exponent-ladder recurrence vs closed form to 1e-12, fixed point exact
5. parameter solvers against hand-derived values and the build-cost exponent
6. size bounds as 20-seed means at n = 1000 and 4000, with a bounded
   reseed-and-report retry policy
7. byte-identical serialization under identical seeds; query-exact round trip
   over 10000 sampled pairs
8. every finite-distance pair classified into the layered or far case with
   the corresponding inequality chain verified
"""

import math
import random
import time
from fractions import Fraction

from distoracle.bunches import build_bunches, build_levels, tz_query
from distoracle.constructions import (
    _far_query,
    build_composite,
    composite_query,
    solve_params_spanner_ado,
    solve_params_spanner_table,
    time_exponent,
)
from distoracle.graphs import nearest_in_set, restricted_graph, sample_subset
from distoracle.harness import audit_stretch, exact_apsp, gen_graph
from distoracle.hierarchy import hado_query, x_sequence
from distoracle.parameterized import ado_p_query, build_ado_p, build_ado_pprime
from distoracle.serialize import dumps_oracle, loads_oracle
from distoracle.spanners import baswana_sen_spanner

INF = math.inf

# (n, m/n) ladder spanning the stated instance range
INSTANCES = [(300, 4), (325, 6), (350, 9), (375, 12), (400, 15)]


def _exhaustive_zero_violations(matrix, weight_dist):
    failures = []
    for ci, (algo, k) in enumerate(matrix):
        for si, (n, f) in enumerate(INSTANCES):
            seed = 100 * ci + si
            g = gen_graph("gnm", n, m=f * n, weight_dist=weight_dist, seed=seed)
            started = time.perf_counter()
            oracle = build_composite(g, algo, k, random.Random(seed), seed=seed)
            report = audit_stretch(g, oracle, mode="exhaustive")
            elapsed = time.perf_counter() - started
            assert elapsed < 120.0, f"{algo} k={k} n={n}: {elapsed:.1f}s over budget"
            if report.violations:
                failures.append(
                    f"{algo} k={k} seed={seed} n={n} m={f * n}: "
                    f"{report.violations} violations, e.g. {report.violation_detail[:2]}"
                )
    assert not failures, "stretch violations:\n" + "\n".join(failures)


def test_criterion_1_weighted_stretch_zero_violations_exhaustive():
    matrix = [
        ("w-subquadratic", 3),
        ("w-subquadratic", 4),
        ("w-spanner-table", 4),
        ("w-spanner-table", 5),
        ("w-spanner-table", 6),
        ("w-spanner-ado", 16),
    ]
    _exhaustive_zero_violations(matrix, "uniform")


def test_criterion_2_unweighted_additive_stretch_zero_violations():
    matrix = [
        ("u-add2", 3),
        ("u-add2", 4),
        ("u-add2k2", 3),
        ("u-add2k2", 4),
        ("u-add2k1", 13),
    ]
    _exhaustive_zero_violations(matrix, "unit")


def test_criterion_3_component_lemmas_hold_exhaustively():
    # (a) parameterized-oracle bound: d <= est <= 2 min(h(u), h(v)) + (2k-1) d
    g = gen_graph("gnm", 200, m=800, weight_dist="uniform", seed=31)
    exact = exact_apsp(g)
    for k in (1, 2, 3):
        rng = random.Random(500 + k)
        s = sorted(rng.sample(range(g.n), 40))
        p = build_ado_p(g, k, s, rng)
        h = p.nearest.h
        for u in range(g.n):
            for v in range(u + 1, g.n):
                d = exact[u][v]
                est = ado_p_query(p, u, v)
                bound = 2.0 * min(h[u], h[v]) + (2 * k - 1) * d
                assert d <= est <= bound + 1e-9 * bound, (
                    f"parameterized k={k} pair ({u},{v}): est {est}, d {d}, bound {bound}"
                )

    # (b) layered-query bound: est <= 2 min over the top-level radii + d
    for k in (1, 2, 3):
        o = build_bunches(g, build_levels(g.n, k, random.Random(600 + k)))
        top = o.hs[k - 1]
        for u in range(g.n):
            for v in range(u + 1, g.n):
                d = exact[u][v]
                est = tz_query(o, u, v)
                bound = 2.0 * min(top[u], top[v]) + d
                assert est <= bound + 1e-9 * bound, (
                    f"classic k={k} pair ({u},{v}): est {est} > {bound}"
                )

    # (c) far-path inequalities whenever every shortest path leaves the
    # restriction: max(h) <= d (weighted), h(u)+h(v) <= d+1 (unweighted)
    for weight_dist in ("uniform", "unit"):
        g2 = gen_graph("gnm", 100, m=500, weight_dist=weight_dist, seed=32)
        exact2 = exact_apsp(g2)
        for size in (4, 20, 60):
            s = sorted(random.Random(700 + size).sample(range(g2.n), size))
            info = nearest_in_set(g2, s)
            exact_r = exact_apsp(restricted_graph(g2, info))
            for u in range(g2.n):
                for v in range(u + 1, g2.n):
                    d = exact2[u][v]
                    if exact_r[u][v] <= d + 1e-9 * max(1.0, d):
                        continue  # a shortest path survives; lemma not invoked
                    if weight_dist == "unit":
                        assert info.h[u] + info.h[v] <= d + 1 + 1e-9, (
                            f"unweighted far-path |S|={size} pair ({u},{v})"
                        )
                    else:
                        assert max(info.h[u], info.h[v]) <= d + 1e-9 * d, (
                            f"weighted far-path |S|={size} pair ({u},{v})"
                        )


def test_criterion_4_exponent_ladder_matches_closed_form():
    for k in range(3, 65):
        for x0 in (1.0 / k, 0.3, 0.5, 0.9):
            xs = x_sequence(k, x0, 10)
            fixed = ((k - 1) * x0 - 1.0 / k) / (k - 2)
            for j, xj in enumerate(xs):
                want = fixed + (x0 - fixed) / (k - 1) ** j
                assert abs(xj - want) <= 1e-12, (k, x0, j, xj, want)
        # fixed point: starting at 1/k the ladder never moves
        assert x_sequence(k, 1.0 / k, 10) == [float(Fraction(1, k))] * 11, k


def test_criterion_5_parameter_solvers_match_hand_derived_values():
    x0, k_prime = solve_params_spanner_table(4, "weighted")
    assert (x0, k_prime) == (float(Fraction(11, 20)), 2)

    x0, k_prime, k_dprime, _ = solve_params_spanner_ado(16)
    assert 2 + (2 * k_dprime - 1) * (2 * k_prime + 1) <= 2 * 16 - 1
    assert (k_prime, k_dprime) == (4, 2)

    reference = {4: 1.800, 5: 1.714, 6: 1.667, 7: 1.636,
                 8: 1.615, 9: 1.600, 10: 1.588}
    for k, want in reference.items():
        got = time_exponent(k)
        assert round(got, 3) == want, f"k={k}: exponent {got:.5f} != {want}"
        assert abs(got - (1.5 + 3.0 / (4 * k - 6))) < 1e-12


def _mean_bounded(label, bound, metric, base_seed, seeds=20, retries=3):
    """Mean-of-20-seeds check with the reseed-and-report retry policy."""
    attempts = []
    for attempt in range(retries):
        vals = [metric(base_seed + 1000 * attempt + i) for i in range(seeds)]
        mean = sum(vals) / len(vals)
        attempts.append(mean)
        if mean <= bound:
            if attempt:
                print(f"{label}: passed on reseed attempt {attempt} "
                      f"(means {[f'{a:.0f}' for a in attempts]})")
            return
    raise AssertionError(
        f"{label}: mean exceeded bound {bound:.1f} on {retries} attempts: {attempts}"
    )


def test_criterion_6_size_bounds_hold_on_average():
    k = 3
    for n in (1000, 4000):
        s_size = round(n ** 0.6)

        def classic_entries(seed):
            g = gen_graph("gnm", n, m=4 * n, weight_dist="uniform", seed=seed)
            return build_bunches(g, build_levels(n, k, random.Random(seed))).total_entries()

        _mean_bounded(f"classic entries n={n}", 8 * k * n ** (1 + 1 / k),
                      classic_entries, base_seed=60)

        def param_entries(seed):
            g = gen_graph("gnm", n, m=4 * n, weight_dist="uniform", seed=seed)
            rng = random.Random(seed)
            s = sample_subset(list(range(n)), float(s_size), rng)
            return build_ado_p(g, k, s, rng).total_entries()

        _mean_bounded(f"parameterized entries n={n}", 8 * n * s_size ** (1 / k),
                      param_entries, base_seed=61)

        def restricted_entries(seed):
            g = gen_graph("gnm", n, m=4 * n, weight_dist="uniform", seed=seed)
            rng = random.Random(seed)
            s = sample_subset(list(range(n)), float(s_size), rng)
            return build_ado_pprime(g, k, s, rng).total_entries()

        _mean_bounded(f"restricted entries n={n}", 8 * s_size ** (1 + 1 / k),
                      restricted_entries, base_seed=62)

        def spanner_edges(seed):
            g = gen_graph("gnm", n, m=8 * n, weight_dist="uniform", seed=seed)
            return baswana_sen_spanner(g, k, random.Random(seed)).h.m

        _mean_bounded(f"spanner edges n={n}", 10 * n ** (1 + 1 / k),
                      spanner_edges, base_seed=63)

        def restriction_edges(seed, p=0.5):
            g = gen_graph("gnm", n, m=25 * n, weight_dist="uniform", seed=seed)
            rng = random.Random(seed)
            s = [v for v in range(n) if rng.random() < p]
            return restricted_graph(g, nearest_in_set(g, s)).m

        _mean_bounded(f"restriction edges n={n}", 10 * n / 0.5,
                      restriction_edges, base_seed=64)


def test_criterion_7_determinism_and_round_trip():
    for algo, k, dist in (("w-spanner-table", 4, "uniform"), ("u-add2k2", 3, "unit")):
        g = gen_graph("gnm", 300, m=1800, weight_dist=dist, seed=71)
        a = build_composite(g, algo, k, random.Random(5), seed=5)
        b = build_composite(g, algo, k, random.Random(5), seed=5)
        blob = dumps_oracle(a)
        assert dumps_oracle(b) == blob, f"{algo}: same seed, different bytes"
        loaded = loads_oracle(blob)
        rng = random.Random(72)
        for _ in range(10000):
            u, v = rng.randrange(g.n), rng.randrange(g.n)
            assert composite_query(loaded, u, v) == composite_query(a, u, v), (
                f"{algo}: round trip changed answer for ({u},{v})"
            )


def test_criterion_8_full_case_coverage_with_verified_chains():
    cases = [
        ("w-subquadratic", 3, "uniform"),
        ("w-spanner-table", 4, "uniform"),
        ("u-add2", 3, "unit"),
        ("u-add2k1", 13, "unit"),
    ]
    for algo, k, dist in cases:
        g = gen_graph("gnm", 150, m=900, weight_dist=dist, seed=81)
        oracle = build_composite(g, algo, k, random.Random(81), seed=81)
        near = oracle.nearest_t
        alpha, beta = oracle.guarantee
        exact = exact_apsp(g)
        exact_r = exact_apsp(restricted_graph(g, near))
        unweighted = dist == "unit"
        for u in range(g.n):
            for v in range(u + 1, g.n):
                d = exact[u][v]
                if d == INF:
                    continue
                in_layered = exact_r[u][v] <= d + 1e-9 * max(1.0, d)
                if unweighted:
                    in_far = near.h[u] + near.h[v] <= d + 1 + 1e-9
                else:
                    in_far = max(near.h[u], near.h[v]) <= d + 1e-9 * max(1.0, d)
                assert in_layered or in_far, (
                    f"{algo}: pair ({u},{v}) fits neither case (d={d})"
                )
                if in_layered:
                    est = hado_query(oracle.hado, u, v)
                    bound = (2 * k - 1) * d
                    assert est <= bound + 1e-9 * bound, (
                        f"{algo}: layered chain broke at ({u},{v}): {est} > {bound}"
                    )
                if in_far:
                    est = _far_query(oracle, u, v)
                    bound = alpha * d + beta
                    assert est <= bound + 1e-9 * bound, (
                        f"{algo}: far chain broke at ({u},{v}): {est} > {bound}"
                    )
        report = audit_stretch(g, oracle, mode="exhaustive")
        assert report.coverage_union == 1.0, f"{algo}: coverage {report.coverage_union}"
