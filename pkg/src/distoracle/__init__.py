"""Approximate distance oracles with multiplicative and additive stretch guarantees.

Library layout:

- graphs: graph container, Dijkstra variants, set restriction, sampling
- bunches: level/bunch oracle (classic construction and its query loop)
- parameterized: oracles tuned to a given vertex subset S (full and S-restricted)
- spanners: cluster-growing multiplicative and near-additive spanners
- hierarchy: the layered oracle over progressively restricted graphs
- constructions: end-to-end builders combining the above, plus parameter solvers
- harness: graph generators, exact baselines, stretch audits, space/time measurement
- serialize: compact binary oracle files
- figures: report figures (PNG) for audit and bench runs
- cli: command-line interface
"""

from distoracle.bunches import build_bunches, build_levels, tz_query
from distoracle.constructions import (
    ALGORITHMS,
    BuildPlan,
    CompositeOracle,
    build_composite,
    composite_query,
    guarantee_for,
)
from distoracle.graphs import Graph, GraphFormatError, dumps_graph, load_graph
from distoracle.harness import audit_stretch, bench_build, exact_apsp, gen_graph
from distoracle.hierarchy import build_hado, hado_query, x_sequence
from distoracle.parameterized import (
    ado_p_query,
    ado_pprime_query,
    build_ado_p,
    build_ado_pprime,
)
from distoracle.serialize import (
    SerializeError,
    dumps_oracle,
    load_oracle,
    loads_oracle,
    save_oracle,
)
from distoracle.spanners import baswana_sen_spanner

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BuildPlan",
    "CompositeOracle",
    "Graph",
    "GraphFormatError",
    "SerializeError",
    "ado_p_query",
    "ado_pprime_query",
    "audit_stretch",
    "baswana_sen_spanner",
    "bench_build",
    "build_ado_p",
    "build_ado_pprime",
    "build_bunches",
    "build_composite",
    "build_hado",
    "build_levels",
    "composite_query",
    "dumps_graph",
    "dumps_oracle",
    "exact_apsp",
    "gen_graph",
    "guarantee_for",
    "hado_query",
    "load_graph",
    "load_oracle",
    "loads_oracle",
    "save_oracle",
    "tz_query",
    "x_sequence",
    "__version__",
]
