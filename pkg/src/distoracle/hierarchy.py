"""Layered oracle over progressively restricted graphs.

A ladder of exponents x_0 <= x_1 <= ... <= x_t controls a chain of sampled
sets V >= S_0 >= S_1 >= ... >= S_t. Each S_i induces a restricted graph (the
union of shortest-path trees toward S_i); the base oracle is the classic
construction on the S_0-restriction and each further level carries an
S_{i-1}-parameterized oracle on the S_i-restriction. A query takes the best
estimate over all layers. Pairs whose shortest path survives the final
restriction are answered within the full multiplicative guarantee.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .bunches import BunchOracle, QueryCounter, build_bunches, build_levels, tz_query
from .graphs import Graph, NearestInfo, nearest_in_set, restricted_graph, sample_subset
from .parameterized import ParamOracle, ado_p_query, build_ado_p

INF = math.inf


def x_sequence(k: int, x0, t: int) -> list[float]:
    """Exponent ladder x_0..x_t: x_i = x_0 - 1/(k(k-1)) + x_{i-1}/(k-1).

    Evaluated in exact rational arithmetic and checked against the closed
    form F + (x_0 - F)/(k-1)^i with fixed point
    F = (k-1)/(k-2)*x_0 - 1/(k(k-2)), then converted to floats. An input
    within 1e-9 of 1/k snaps to exactly 1/k, making the fixed point exact.

    This is pure series arithmetic; the domain restrictions a build needs
    (1/k <= x0 < 1) are enforced by build_hado.
    """
    if k < 3:
        raise ValueError("k must be >= 3")
    if t < 0:
        raise ValueError("t must be >= 0")
    x = Fraction(x0)
    lo = Fraction(1, k)
    if abs(x - lo) < Fraction(1, 10**9):
        x = lo
    step = Fraction(1, k * (k - 1))
    xs = [x]
    for _ in range(t):
        xs.append(x - step + xs[-1] / (k - 1))
    fixed = Fraction(k - 1, k - 2) * x - Fraction(1, k * (k - 2))
    for i, xi in enumerate(xs):
        assert xi == fixed + (x - fixed) / Fraction(k - 1) ** i
    return [float(xi) for xi in xs]


def num_layers(n: int) -> int:
    """t = max(1, ceil(log2 log2 n)); the ladder has t + 1 exponents."""
    if n < 2:
        raise ValueError("need at least two vertices")
    return max(1, math.ceil(math.log2(math.log2(n))))


@dataclass
class HadoParams:
    k: int
    x0: float
    t: int
    xs: list[float]


@dataclass
class Hado:
    params: HadoParams
    base: BunchOracle
    levels: list[ParamOracle]
    s_sets: list[list[int]]
    nearest_t: NearestInfo
    warnings: list[str] = field(default_factory=list)
    phase_ms: dict[str, float] = field(default_factory=dict)
    seed: int = 0

    def total_entries(self) -> int:
        return self.base.total_entries() + sum(o.total_entries() for o in self.levels)


def _sample_layer(n, prev, exponent, rng, warnings, label):
    raw = n ** (1.0 - exponent)
    target = min(raw, float(len(prev)))
    if target < 1.0:
        warnings.append(f"{label}: target {raw:.3g} clamped to 1")
        target = 1.0
    return sample_subset(prev, target, rng)


def build_hado(g: Graph, k: int, x0: float, rng) -> Hado:
    """Construct the layered oracle (Algorithm: sample, restrict, build, repeat)."""
    if k < 3:
        raise ValueError("k must be >= 3")
    if x0 < 1.0 / k - 1e-9:
        raise ValueError(f"x0 = {x0} below 1/k")
    if x0 >= 1.0:
        raise ValueError(f"x0 = {x0} must be below 1")
    n = g.n
    t = num_layers(n)
    xs = x_sequence(k, x0, t)
    params = HadoParams(k=k, x0=float(xs[0]), t=t, xs=xs)
    warnings: list[str] = []
    phase_ms = {"sample": 0.0, "restrict": 0.0, "base": 0.0, "levels": 0.0}

    tick = time.perf_counter()
    s0 = _sample_layer(n, list(range(n)), xs[0], rng, warnings, "layer 0")
    phase_ms["sample"] += (time.perf_counter() - tick) * 1e3

    tick = time.perf_counter()
    info = nearest_in_set(g, s0)
    g0 = restricted_graph(g, info)
    phase_ms["restrict"] += (time.perf_counter() - tick) * 1e3

    tick = time.perf_counter()
    base = build_bunches(g0, build_levels(n, k, rng))
    phase_ms["base"] += (time.perf_counter() - tick) * 1e3

    s_sets = [s0]
    levels: list[ParamOracle] = []
    for i in range(1, t + 1):
        tick = time.perf_counter()
        s_i = _sample_layer(n, s_sets[-1], xs[i], rng, warnings, f"layer {i}")
        phase_ms["sample"] += (time.perf_counter() - tick) * 1e3

        tick = time.perf_counter()
        info = nearest_in_set(g, s_i)
        g_i = restricted_graph(g, info)
        phase_ms["restrict"] += (time.perf_counter() - tick) * 1e3

        tick = time.perf_counter()
        levels.append(build_ado_p(g_i, k - 1, s_sets[-1], rng))
        phase_ms["levels"] += (time.perf_counter() - tick) * 1e3
        s_sets.append(s_i)

    return Hado(
        params=params,
        base=base,
        levels=levels,
        s_sets=s_sets,
        nearest_t=info,
        warnings=warnings,
        phase_ms=phase_ms,
    )


def hado_query(h: Hado, u: int, v: int, counter: QueryCounter | None = None) -> float:
    """Best estimate over the base oracle and every layer oracle."""
    best = tz_query(h.base, u, v, counter=counter)
    for po in h.levels:
        cand = ado_p_query(po, u, v, counter=counter)
        if cand < best:
            best = cand
    return best
