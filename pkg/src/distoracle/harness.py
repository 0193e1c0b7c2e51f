"""Experiment harness: graph generators, exact distances, audits, benchmarks.

The audit walks pairs of vertices, compares oracle answers with exact
distances, and reports violations of the advertised guarantee together with
slack statistics, case coverage (for composite oracles), space usage, and
timing. Everything is deterministic given an explicit rng.
"""

from __future__ import annotations

import math
import random
import statistics
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as sp_dijkstra

from .bunches import BunchOracle, tz_query
from .constructions import BUILDERS, CompositeOracle, composite_query
from .graphs import Graph, dijkstra, restricted_graph
from .hierarchy import Hado, hado_query
from .parameterized import (
    ParamOracle,
    RestrictedParamOracle,
    ado_p_query,
    ado_pprime_query,
)

INF = math.inf

GRAPH_MODELS = ("gnm", "grid", "path", "star", "cycle", "clustered")
WEIGHT_DISTS = ("unit", "uniform", "exp")


def _draw_weight(dist: str, rng: random.Random) -> float:
    if dist == "unit":
        return 1.0
    if dist == "uniform":
        return float(rng.randint(1, 10))
    if dist == "exp":
        return rng.expovariate(1.0) + 1e-3
    raise ValueError(f"unknown weight distribution {dist!r}; choose from {WEIGHT_DISTS}")


def gen_graph(model: str, n: int, m: int = 0, weight_dist: str = "unit",
              seed: int = 0) -> Graph:
    """Generate a connected test graph.

    `m` is the target edge count for the gnm and clustered models (clamped to
    at least a spanning tree, at most a clique) and ignored by the fixed
    topologies.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    edges: dict[tuple[int, int], float] = {}

    def put(u: int, v: int) -> None:
        if u != v:
            edges.setdefault((min(u, v), max(u, v)), _draw_weight(weight_dist, rng))

    if model == "path":
        for i in range(n - 1):
            put(i, i + 1)
    elif model == "cycle":
        for i in range(n - 1):
            put(i, i + 1)
        if n > 2:
            put(n - 1, 0)
    elif model == "star":
        for i in range(1, n):
            put(0, i)
    elif model == "grid":
        rows = max(1, int(math.isqrt(n)))
        cols = (n + rows - 1) // rows
        for v in range(n):
            r, c = divmod(v, cols)
            if c + 1 < cols and v + 1 < n:
                put(v, v + 1)
            if (r + 1) * cols + c < n:
                put(v, v + cols)
    elif model in ("gnm", "clustered"):
        blocks = max(2, round(n ** 0.5 / 2)) if model == "clustered" else 1
        block_of = [v * blocks // n for v in range(n)]
        order = list(range(n))
        rng.shuffle(order)
        for i in range(1, n):
            v = order[i]
            anchors = order[:i]
            if model == "clustered" and rng.random() < 0.9:
                same = [u for u in anchors if block_of[u] == block_of[v]]
                anchors = same or anchors
            put(rng.choice(anchors), v)
        cap = n * (n - 1) // 2
        target = min(max(m, len(edges)), cap)
        while len(edges) < target:
            u = rng.randrange(n)
            if model == "clustered" and rng.random() < 0.9:
                peers = [w for w in range(n) if block_of[w] == block_of[u] and w != u]
                v = rng.choice(peers) if peers else rng.randrange(n)
            else:
                v = rng.randrange(n)
            put(u, v)
    else:
        raise ValueError(f"unknown graph model {model!r}; choose from {GRAPH_MODELS}")

    return Graph.from_edges(n, sorted((u, v, w) for (u, v), w in edges.items()))


def exact_apsp(g: Graph, cap: int = 2000) -> np.ndarray:
    """All-pairs shortest path distances as a dense (n, n) float array.

    Uses the sparse-graph solver; graphs containing zero-weight edges fall
    back to per-source sweeps because a zero entry in a sparse matrix is
    indistinguishable from a missing edge.
    """
    if g.n > cap:
        raise ValueError(f"graph too large for exact all-pairs ({g.n} > cap {cap})")
    if g.n == 0:
        return np.zeros((0, 0))
    if any(w == 0 for _, _, w in g.edges):
        return np.array([dijkstra(g, s).dist for s in range(g.n)])
    rows = [u for u, v, w in g.edges] + [v for u, v, w in g.edges]
    cols = [v for u, v, w in g.edges] + [u for u, v, w in g.edges]
    vals = [w for u, v, w in g.edges] * 2
    mat = csr_matrix((vals, (rows, cols)), shape=(g.n, g.n))
    return sp_dijkstra(mat, directed=False)


# ---------------------------------------------------------------------------
# dispatch: one uniform way to query any oracle and know its guarantee


def oracle_bounds(oracle):
    """Return (query_fn, bound_fn, kind) for a supported oracle.

    bound_fn(u, v, d) is the largest estimate the guarantee allows for the
    pair; estimates must also never drop below d.
    """
    if isinstance(oracle, CompositeOracle):
        alpha, beta = oracle.guarantee
        return (
            lambda u, v: composite_query(oracle, u, v),
            lambda u, v, d: alpha * d + beta,
            "composite",
        )
    if isinstance(oracle, RestrictedParamOracle):
        k = oracle.k
        return (
            lambda u, v: ado_pprime_query(oracle, u, v),
            lambda u, v, d: (2 * k - 1) * d,
            "restricted",
        )
    if isinstance(oracle, ParamOracle):
        k = oracle.k
        h = oracle.nearest.h
        return (
            lambda u, v: ado_p_query(oracle, u, v),
            lambda u, v, d: 2.0 * min(h[u], h[v]) + (2 * k - 1) * d,
            "parameterized",
        )
    if isinstance(oracle, Hado):
        # unconditional soundness; the multiplicative bound only binds for
        # pairs still connected at true distance in the final restriction,
        # which the audit checks through case coverage instead
        return (
            lambda u, v: hado_query(oracle, u, v),
            lambda u, v, d: INF,
            "hado",
        )
    if isinstance(oracle, BunchOracle):
        k = oracle.num_levels
        return (
            lambda u, v: tz_query(oracle, u, v),
            lambda u, v, d: (2 * k - 1) * d,
            "classic",
        )
    raise TypeError(f"unsupported oracle type {type(oracle).__name__}")


def measure_space(oracle) -> dict[str, int]:
    """Entry counts per component plus a grand total.

    A stored (key, distance) pair counts as one entry; per-vertex pivot and
    radius rows count one entry per level. Restricted oracles only charge
    pivot rows for the vertices they serve.
    """
    if isinstance(oracle, CompositeOracle):
        out = dict(oracle.entries_breakdown())
        out["pivots"] = _pivot_rows(oracle.hado)
        if oracle.far_param is not None:
            out["pivots"] += oracle.far_param.oracle.num_levels * oracle.far_param.oracle.n
        if oracle.far_ado is not None:
            out["pivots"] += oracle.far_ado.oracle.num_levels * len(oracle.far_ado.s)
    elif isinstance(oracle, Hado):
        out = {"bunch": oracle.total_entries(), "pivots": _pivot_rows(oracle),
               "nearest": oracle.base.n}
    elif isinstance(oracle, RestrictedParamOracle):
        out = {"bunch": oracle.total_entries(),
               "pivots": oracle.oracle.num_levels * len(oracle.s)}
    elif isinstance(oracle, ParamOracle):
        out = {"bunch": oracle.total_entries(),
               "pivots": oracle.oracle.num_levels * oracle.oracle.n}
    elif isinstance(oracle, BunchOracle):
        out = {"bunch": oracle.total_entries(),
               "pivots": oracle.num_levels * oracle.n}
    else:
        raise TypeError(f"unsupported oracle type {type(oracle).__name__}")
    out["total"] = sum(out.values())
    return out


def _pivot_rows(h: Hado) -> int:
    rows = h.base.num_levels * h.base.n
    for lvl in h.levels:
        rows += lvl.oracle.num_levels * lvl.oracle.n
    return rows


# ---------------------------------------------------------------------------
# audit


@dataclass
class AuditReport:
    kind: str
    n: int
    m: int
    pairs_checked: int
    violations: int
    max_mult_slack: float
    max_add_slack: float
    coverage_hado: float
    coverage_far: float
    coverage_union: float
    space_entries: int
    ms_build: float
    ms_query_per_1k: float
    samples: list[tuple[float, float]] = field(default_factory=list)
    violation_detail: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "m": self.m,
            "pairs": self.pairs_checked,
            "violations": self.violations,
            "max_mult_slack": round(self.max_mult_slack, 6),
            "max_add_slack": round(self.max_add_slack, 6),
            "coverage_hado": round(self.coverage_hado, 6),
            "coverage_far": round(self.coverage_far, 6),
            "coverage_union": round(self.coverage_union, 6),
            "entries": self.space_entries,
            "ms_build": round(self.ms_build, 3),
            "ms_query_per_1k": round(self.ms_query_per_1k, 3),
        }

    def to_text(self) -> str:
        lines = [
            f"audit of {self.kind} oracle on n={self.n} m={self.m}",
            f"  pairs checked      {self.pairs_checked}",
            f"  violations         {self.violations}",
            f"  max mult slack     {self.max_mult_slack:.6f}",
            f"  max additive slack {self.max_add_slack:.6f}",
        ]
        if self.kind in ("composite", "hado"):
            lines += [
                f"  coverage layered   {self.coverage_hado:.4f}",
                f"  coverage far       {self.coverage_far:.4f}",
                f"  coverage union     {self.coverage_union:.4f}",
            ]
        lines += [
            f"  space entries      {self.space_entries}",
            f"  build ms           {self.ms_build:.3f}",
            f"  query ms / 1000    {self.ms_query_per_1k:.3f}",
            "  verdict            " + ("PASS" if self.ok else "FAIL"),
        ]
        lines += [f"  violation: {d}" for d in self.violation_detail[:20]]
        return "\n".join(lines)


def _pair_iter(universe, mode: str, pairs: int, rng: random.Random):
    """Yield (u, targets) groups; exhaustive covers every unordered pair."""
    verts = list(universe)
    if mode == "exhaustive":
        for i, u in enumerate(verts):
            yield u, verts[i + 1:]
        return
    if mode != "sampled":
        raise ValueError("mode must be 'exhaustive' or 'sampled'")
    chosen: dict[int, list[int]] = {}
    for _ in range(pairs):
        u = rng.choice(verts)
        v = rng.choice(verts)
        if u == v:
            continue
        chosen.setdefault(min(u, v), []).append(max(u, v))
    for u in sorted(chosen):
        yield u, chosen[u]


def audit_stretch(g: Graph, oracle, mode: str = "exhaustive", pairs: int = 10000,
                  rng: random.Random | None = None, reservoir: int = 400,
                  rel_tol: float = 1e-9) -> AuditReport:
    """Compare oracle answers against exact distances pair by pair."""
    rng = rng or random.Random(0)
    qfn, bound_fn, kind = oracle_bounds(oracle)
    universe = sorted(oracle.s) if kind == "restricted" else range(g.n)

    near = None
    gr = None
    if isinstance(oracle, CompositeOracle):
        near = oracle.nearest_t
    elif isinstance(oracle, Hado):
        near = oracle.nearest_t
    if near is not None:
        gr = restricted_graph(g, near)
    unweighted = g.is_unweighted()

    checked = violations = 0
    max_mult = 0.0
    max_add = 0.0
    cov_h = cov_f = cov_u = 0
    samples: list[tuple[float, float]] = []
    detail: list[str] = []
    seen = 0
    q_ms = 0.0

    for u, targets in _pair_iter(universe, mode, pairs, rng):
        dist_u = dijkstra(g, u).dist
        dist_r = dijkstra(gr, u).dist if gr is not None else None
        for v in targets:
            d = dist_u[v]
            t0 = time.perf_counter()
            est = qfn(u, v)
            q_ms += (time.perf_counter() - t0) * 1e3
            checked += 1
            bad = None
            if d == INF:
                if est != INF:
                    bad = f"({u},{v}) disconnected but est={est}"
            elif est < d - rel_tol * max(1.0, d):
                bad = f"({u},{v}) est={est} below true {d}"
            else:
                bound = bound_fn(u, v, d)
                if est > bound + rel_tol * max(1.0, bound):
                    bad = f"({u},{v}) est={est} above bound {bound} (d={d})"
                if d > 0:
                    max_mult = max(max_mult, est / d)
                    max_add = max(max_add, est - d)
            if bad is not None:
                violations += 1
                if len(detail) < 50:
                    detail.append(bad)
            if near is not None and d < INF:
                in_h = dist_r[v] <= d + rel_tol * max(1.0, d)
                if unweighted:
                    in_f = near.h[u] + near.h[v] <= d + 1 + rel_tol
                else:
                    in_f = max(near.h[u], near.h[v]) <= d + rel_tol * max(1.0, d)
                cov_h += in_h
                cov_f += in_f
                cov_u += in_h or in_f
            seen += 1
            if d < INF:
                if len(samples) < reservoir:
                    samples.append((d, est))
                else:
                    j = rng.randrange(seen)
                    if j < reservoir:
                        samples[j] = (d, est)

    denom = max(1, checked)
    build_ms = getattr(oracle, "build_ms", 0.0) or sum(
        getattr(oracle, "phase_ms", {}).values()
    )
    return AuditReport(
        kind=kind,
        n=g.n,
        m=g.m,
        pairs_checked=checked,
        violations=violations,
        max_mult_slack=max_mult,
        max_add_slack=max_add,
        coverage_hado=cov_h / denom if near is not None else 0.0,
        coverage_far=cov_f / denom if near is not None else 0.0,
        coverage_union=cov_u / denom if near is not None else 0.0,
        space_entries=measure_space(oracle)["total"],
        ms_build=build_ms,
        ms_query_per_1k=q_ms / max(1e-12, checked) * 1000.0,
        samples=samples,
        violation_detail=detail,
    )


# ---------------------------------------------------------------------------
# benchmark


@dataclass
class BenchReport:
    algo: str
    k: int
    n: int
    m: int
    reps: int
    build_ms: tuple[float, float, float]  # (q1, median, q3)
    phase_ms: dict[str, tuple[float, float, float]]
    query_ms_per_1k: tuple[float, float, float]
    entries: int

    def to_record(self) -> dict:
        rec = {
            "algo": self.algo,
            "k": self.k,
            "n": self.n,
            "m": self.m,
            "reps": self.reps,
            "build_ms_median": round(self.build_ms[1], 3),
            "build_ms_iqr": round(self.build_ms[2] - self.build_ms[0], 3),
            "query_ms_per_1k_median": round(self.query_ms_per_1k[1], 3),
            "entries": self.entries,
        }
        for name, (q1, med, q3) in sorted(self.phase_ms.items()):
            rec[f"phase_{name}_ms"] = round(med, 3)
        return rec

    def to_text(self) -> str:
        q1, med, q3 = self.build_ms
        lines = [
            f"bench {self.algo} k={self.k} on n={self.n} m={self.m} ({self.reps} reps)",
            f"  build ms         median {med:.2f}  iqr [{q1:.2f}, {q3:.2f}]",
        ]
        for name, (a, b, c) in sorted(self.phase_ms.items()):
            lines.append(f"  phase {name:<10} median {b:.2f}  iqr [{a:.2f}, {c:.2f}]")
        qq1, qmed, qq3 = self.query_ms_per_1k
        lines.append(f"  query ms / 1000  median {qmed:.3f}  iqr [{qq1:.3f}, {qq3:.3f}]")
        lines.append(f"  space entries    {self.entries}")
        return "\n".join(lines)


def _spread(values: list[float]) -> tuple[float, float, float]:
    med = statistics.median(values)
    if len(values) < 2:
        return med, med, med
    qs = statistics.quantiles(values, n=4, method="inclusive")
    return qs[0], med, qs[2]


def bench_build(g: Graph, algo: str, k: int, reps: int = 3, seed: int = 0,
                query_batch: int = 1000) -> BenchReport:
    """Build `reps` oracles on fresh seeds; report per-phase timing spreads."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    builds: list[float] = []
    phases: dict[str, list[float]] = {}
    queries: list[float] = []
    oracle = None
    for r in range(reps):
        rng = random.Random(seed + r)
        oracle = BUILDERS[algo](g, k, rng, seed=seed + r)
        builds.append(oracle.build_ms)
        for name, ms in oracle.phase_ms.items():
            phases.setdefault(name, []).append(ms)
        pick = random.Random(seed + 1000 + r)
        batch = [(pick.randrange(g.n), pick.randrange(g.n)) for _ in range(query_batch)]
        t0 = time.perf_counter()
        for u, v in batch:
            composite_query(oracle, u, v)
        queries.append((time.perf_counter() - t0) * 1e3 / query_batch * 1000.0)
    return BenchReport(
        algo=algo,
        k=k,
        n=g.n,
        m=g.m,
        reps=reps,
        build_ms=_spread(builds),
        phase_ms={name: _spread(vals) for name, vals in phases.items()},
        query_ms_per_1k=_spread(queries),
        entries=measure_space(oracle)["total"],
    )
