"""Distance oracles tuned to a distinguished vertex subset S.

The full variant answers queries for all pairs with an additive term of twice
the distance to S; the projected variant keeps tables only for members of S
and answers queries within S x S at plain multiplicative stretch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bunches import BunchOracle, Levels, QueryCounter, _build_tables, tz_query
from .graphs import Graph, NearestInfo, sample_subset

INF = math.inf


@dataclass
class ParamOracle:
    """Oracle whose level 1 is the given set S (level 0 stores only identity)."""

    k: int
    s: list[int]
    oracle: BunchOracle
    nearest: NearestInfo

    def total_entries(self) -> int:
        return self.oracle.total_entries()


@dataclass
class RestrictedParamOracle:
    """Projection of a ParamOracle onto S: only S x S pairs may be queried."""

    k: int
    s: list[int]
    oracle: BunchOracle
    _s_index: frozenset

    def total_entries(self) -> int:
        return self.oracle.total_entries()


def _param_levels(g: Graph, k: int, s: list[int], rng) -> Levels:
    """A_0 = V, A_1 = S, then k-1 further levels thinned at rate |S|^(-1/k)."""
    members = sorted(set(s))
    if not members:
        raise ValueError("S must be non-empty")
    if not (0 <= members[0] and members[-1] < g.n):
        raise ValueError(f"S contains vertices outside 0..{g.n - 1}")
    if k < 1:
        raise ValueError("k must be >= 1")
    sets = [list(range(g.n)), members]
    rate = len(members) ** (-1.0 / k)
    for _ in range(2, k + 1):
        prev = sets[-1]
        if len(prev) == 1:
            sets.append(list(prev))
            continue
        target = max(len(prev) * rate, 1e-9)
        sets.append(sample_subset(prev, target, rng))
    return Levels(k=k, sets=sets)


def build_ado_p(g: Graph, k: int, s, rng) -> ParamOracle:
    """Construct the S-parameterized oracle (k + 1 levels, singleton level 0)."""
    levels = _param_levels(g, k, list(s), rng)
    pivots, hs, bunch, relaxations, phase_ms = _build_tables(g, levels, skip_level_zero=True)
    inner = BunchOracle(
        mode="parameterized",
        k=k,
        n=g.n,
        levels=levels,
        pivots=pivots,
        hs=hs,
        bunch=bunch,
        s_set=levels.sets[1],
        relaxations=relaxations,
        phase_ms=phase_ms,
    )
    nearest = NearestInfo(set_members=levels.sets[1], h=hs[1], p=pivots[1])
    return ParamOracle(k=k, s=levels.sets[1], oracle=inner, nearest=nearest)


def ado_p_query(o: ParamOracle, u: int, v: int, counter: QueryCounter | None = None) -> float:
    """Estimate d(u, v); at most k + 1 ladder iterations per direction."""
    return tz_query(o.oracle, u, v, counter=counter)


def build_ado_pprime(g: Graph, k: int, s, rng) -> RestrictedParamOracle:
    """Construct the S-restricted oracle by projecting the full one onto S.

    Consumes the rng identically to build_ado_p, so under the same seed the
    two oracles agree exactly on S x S.
    """
    full = build_ado_p(g, k, s, rng)
    inner = full.oracle
    keep = frozenset(full.s)
    for v in range(inner.n):
        if v not in keep:
            inner.bunch[v] = {}
    inner.mode = "restricted"
    return RestrictedParamOracle(k=k, s=full.s, oracle=inner, _s_index=keep)


def ado_pprime_query(
    o: RestrictedParamOracle, s1: int, s2: int, counter: QueryCounter | None = None
) -> float:
    """Estimate d(s1, s2) for members of S; other vertices are rejected."""
    if s1 not in o._s_index or s2 not in o._s_index:
        raise ValueError("restricted oracle can only be queried on members of S")
    return tz_query(o.oracle, s1, s2, counter=counter)
