"""Command-line interface.

Verbs: gen, build, query, audit, bench, info. Vertex ids are 1-based on the
command line and in all printed pair listings; library structures are
0-based. Exit codes: 0 success, 1 a finished audit found guarantee
violations, 2 usage or parameter errors, 3 I/O or file-format errors.
"""

from __future__ import annotations

import argparse
import math
import random
import sys
from pathlib import Path

from . import __version__
from .bunches import BunchOracle
from .constructions import (
    ALGORITHMS,
    MIN_K,
    BuildPlan,
    CompositeOracle,
    build_composite,
    check_k,
    guarantee_for,
    solve_params_spanner_ado,
    solve_params_spanner_table,
    solve_x0_subquadratic,
)
from .figures import render_bench_figure, render_stretch_figure
from .graphs import GraphFormatError, dumps_graph, load_graph
from .harness import (
    GRAPH_MODELS,
    WEIGHT_DISTS,
    audit_stretch,
    bench_build,
    gen_graph,
    measure_space,
    oracle_bounds,
)
from .serialize import SerializeError, load_oracle, save_oracle

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="distoracle",
        description="Approximate distance oracles: build, query, audit, benchmark.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    gen = sub.add_parser("gen", help="generate a connected test graph")
    gen.add_argument("--model", choices=GRAPH_MODELS, default="gnm")
    gen.add_argument("--n", type=int, required=True, help="vertex count")
    gen.add_argument("--m", type=int, default=0, help="edge target (gnm, clustered)")
    gen.add_argument("--weights", choices=WEIGHT_DISTS, default="unit")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="output file (stdout when omitted)")

    build = sub.add_parser("build", help="build an oracle and store it")
    build.add_argument("--graph", required=True, help="input graph file")
    build.add_argument("--algo", choices=ALGORITHMS, required=True)
    build.add_argument("--k", type=int, required=True)
    build.add_argument("--seed", type=int, default=0)
    build.add_argument("--threads", type=int, default=1,
                       help="reserved; computations run serially")
    build.add_argument("--out", required=True, help="oracle blob path")

    query = sub.add_parser("query", help="answer distance queries from a stored oracle")
    query.add_argument("--oracle", required=True, help="oracle blob path")
    query.add_argument("--pairs", required=True,
                       help="'u:v,u:v,...' (1-based ids) or a count of random pairs")
    query.add_argument("--seed", type=int, default=0, help="seed for random pairs")
    query.add_argument("--format", choices=("text", "tsv"), default="text")
    query.add_argument("--out", help="write results here instead of stdout")

    audit = sub.add_parser("audit", help="compare oracle answers with exact distances")
    audit.add_argument("--graph", required=True)
    audit.add_argument("--algo", choices=ALGORITHMS, help="build this construction")
    audit.add_argument("--k", type=int)
    audit.add_argument("--oracle", help="audit a stored blob instead of building")
    audit.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    audit.add_argument("--pairs", type=int, default=10000,
                       help="pair budget for sampled mode")
    audit.add_argument("--seed", type=int, default=0)
    audit.add_argument("--threads", type=int, default=1,
                       help="reserved; computations run serially")
    audit.add_argument("--format", choices=("text", "tsv"), default="text")
    audit.add_argument("--out",
                       help="directory for report.txt, report.tsv, stretch.png")

    bench = sub.add_parser("bench", help="time oracle construction and queries")
    bench.add_argument("--graph", required=True)
    bench.add_argument("--algo", choices=ALGORITHMS, required=True)
    bench.add_argument("--k", type=int, required=True)
    bench.add_argument("--reps", type=int, default=3)
    bench.add_argument("--pairs", type=int, default=1000,
                       help="queries per repetition for throughput timing")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--threads", type=int, default=1,
                       help="reserved; computations run serially")
    bench.add_argument("--format", choices=("text", "tsv"), default="text")
    bench.add_argument("--out",
                       help="directory for report.txt, report.tsv, bench.png")

    info = sub.add_parser("info", help="show solved parameters or describe a blob")
    info.add_argument("--algo", choices=ALGORITHMS)
    info.add_argument("--k", type=int)
    info.add_argument("--n", type=int, help="vertex count (density-driven exponent)")
    info.add_argument("--m", type=int, help="edge count (density-driven exponent)")
    info.add_argument("--oracle", help="describe a stored oracle blob")
    return p


# ---------------------------------------------------------------------------
# helpers


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fmt_dist(x: float) -> str:
    if x == math.inf:
        return "inf"
    return f"{x:.9g}"


def _oracle_n(oracle) -> int:
    if isinstance(oracle, (CompositeOracle,)):
        return oracle.n
    if isinstance(oracle, BunchOracle):
        return oracle.n
    if hasattr(oracle, "base"):  # layered
        return oracle.base.n
    return oracle.oracle.n  # parameterized / restricted


def _parse_pairs(spec: str, oracle, seed: int) -> list[tuple[int, int]]:
    n = _oracle_n(oracle)
    spec = spec.strip()
    if ":" not in spec:
        try:
            count = int(spec)
        except ValueError:
            raise ValueError(f"--pairs must be 'u:v,...' or an integer, got {spec!r}")
        if count < 1:
            raise ValueError("--pairs count must be positive")
        rng = random.Random(seed)
        universe = sorted(oracle.s) if hasattr(oracle, "_s_index") else range(n)
        return [(rng.choice(universe), rng.choice(universe)) for _ in range(count)]
    out = []
    for part in spec.split(","):
        bits = part.split(":")
        if len(bits) != 2:
            raise ValueError(f"bad pair {part!r}; expected u:v")
        u, v = int(bits[0]) - 1, int(bits[1]) - 1
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"pair {part!r} outside 1..{n}")
        out.append((u, v))
    return out


def _plan_text(plan: BuildPlan, guarantee: tuple[int, int]) -> str:
    alpha, beta = guarantee
    lines = [
        f"algorithm   {plan.algo}",
        f"k           {plan.k}",
        f"exponent x0 {plan.x0:.6f}",
    ]
    if plan.k_prime is not None:
        lines.append(f"k'          {plan.k_prime}")
    if plan.k_dprime is not None:
        lines.append(f"k''         {plan.k_dprime}")
    lines.append(f"guarantee   est <= {alpha}*d" + (f" + {beta}" if beta else ""))
    for note in plan.notes:
        lines.append(f"note        {note}")
    return "\n".join(lines) + "\n"


def _tsv(record: dict) -> str:
    keys = list(record)
    return "\t".join(keys) + "\n" + "\t".join(str(record[k]) for k in keys) + "\n"


def _guarantee_of(oracle):
    if isinstance(oracle, CompositeOracle):
        return oracle.guarantee
    if isinstance(oracle, BunchOracle):
        return (2 * oracle.num_levels - 1, 0)
    return None


# ---------------------------------------------------------------------------
# verbs


def _cmd_gen(args) -> int:
    g = gen_graph(args.model, args.n, m=args.m, weight_dist=args.weights,
                  seed=args.seed)
    comment = (f"generated model={args.model} n={g.n} m={g.m} "
               f"weights={args.weights} seed={args.seed}")
    _write_or_print(dumps_graph(g, comments=[comment]), args.out)
    return EXIT_OK


def _cmd_build(args) -> int:
    g = load_graph(Path(args.graph).read_text(encoding="utf-8"))
    check_k(args.algo, args.k)
    oracle = build_composite(g, args.algo, args.k, random.Random(args.seed),
                             seed=args.seed)
    save_oracle(args.out, oracle)
    size = Path(args.out).stat().st_size
    sys.stdout.write(_plan_text(oracle.plan, oracle.guarantee))
    sys.stdout.write(
        f"entries     {oracle.total_entries()}\n"
        f"build ms    {oracle.build_ms:.1f}\n"
        f"blob bytes  {size}\n"
        f"written     {args.out}\n"
    )
    return EXIT_OK


def _cmd_query(args) -> int:
    oracle = load_oracle(args.oracle)
    qfn, _, _ = oracle_bounds(oracle)
    pairs = _parse_pairs(args.pairs, oracle, args.seed)
    lines = []
    if args.format == "tsv":
        lines.append("u\tv\testimate")
    for u, v in pairs:
        est = _fmt_dist(qfn(u, v))
        if args.format == "tsv":
            lines.append(f"{u + 1}\t{v + 1}\t{est}")
        else:
            lines.append(f"{u + 1:>6} {v + 1:>6}  {est}")
    _write_or_print("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_audit(args) -> int:
    g = load_graph(Path(args.graph).read_text(encoding="utf-8"))
    if args.oracle:
        oracle = load_oracle(args.oracle)
    else:
        if not args.algo or args.k is None:
            raise ValueError("audit needs either --oracle or both --algo and --k")
        check_k(args.algo, args.k)
        oracle = build_composite(g, args.algo, args.k, random.Random(args.seed),
                                 seed=args.seed)
    report = audit_stretch(g, oracle, mode=args.mode, pairs=args.pairs,
                           rng=random.Random(args.seed))
    if args.format == "tsv":
        sys.stdout.write(_tsv(report.to_record()))
    else:
        sys.stdout.write(report.to_text() + "\n")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(report.to_text() + "\n", encoding="utf-8")
        (out / "report.tsv").write_text(_tsv(report.to_record()), encoding="utf-8")
        render_stretch_figure(report, out / "stretch.png",
                              guarantee=_guarantee_of(oracle))
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_bench(args) -> int:
    g = load_graph(Path(args.graph).read_text(encoding="utf-8"))
    check_k(args.algo, args.k)
    report = bench_build(g, args.algo, args.k, reps=args.reps, seed=args.seed,
                         query_batch=args.pairs)
    if args.format == "tsv":
        sys.stdout.write(_tsv(report.to_record()))
    else:
        sys.stdout.write(report.to_text() + "\n")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(report.to_text() + "\n", encoding="utf-8")
        (out / "report.tsv").write_text(_tsv(report.to_record()), encoding="utf-8")
        render_bench_figure(report, out / "bench.png")
    return EXIT_OK


def _solve_plan(args) -> BuildPlan:
    algo, k = args.algo, args.k
    check_k(algo, k)
    notes: list[str] = []
    k_prime = k_dprime = None
    if algo == "w-subquadratic":
        if args.n is None or args.m is None:
            raise ValueError("w-subquadratic exponent depends on the graph; "
                             "pass --n and --m")
        x0 = solve_x0_subquadratic(args.n, args.m, k)
        notes.append(f"density exponent for n={args.n}, m={args.m}")
    elif algo == "w-spanner-table":
        x0, k_prime = solve_params_spanner_table(k, "weighted")
    elif algo == "u-add2":
        x0, k_prime = solve_params_spanner_table(k, "u-add2")
    elif algo == "u-add2k2":
        x0, k_prime = solve_params_spanner_table(k, "u-add2k2")
    elif algo == "w-spanner-ado":
        x0, k_prime, k_dprime, notes = solve_params_spanner_ado(k)
    else:  # u-add2k1
        x0, k_prime, k_dprime, notes = solve_params_spanner_ado(k, unweighted=True)
    return BuildPlan(algo=algo, k=k, x0=x0, k_prime=k_prime, k_dprime=k_dprime,
                     notes=notes)


def _cmd_info(args) -> int:
    if args.oracle:
        oracle = load_oracle(args.oracle)
        if isinstance(oracle, CompositeOracle):
            sys.stdout.write(_plan_text(oracle.plan, oracle.guarantee))
        else:
            sys.stdout.write(f"oracle kind {type(oracle).__name__}\n")
        space = measure_space(oracle)
        for name in sorted(space):
            if name != "total":
                sys.stdout.write(f"entries {name:<13} {space[name]}\n")
        sys.stdout.write(f"entries total         {space['total']}\n")
        return EXIT_OK
    if args.algo:
        if args.k is None:
            raise ValueError("--algo needs --k")
        plan = _solve_plan(args)
        sys.stdout.write(_plan_text(plan, guarantee_for(args.algo, args.k)))
        return EXIT_OK
    sys.stdout.write(f"{'algorithm':<16} {'min k':>5}  {'input':<10} guarantee\n")
    for algo in ALGORITHMS:
        kind = "weighted" if algo.startswith("w-") else "unweighted"
        beta = {"u-add2": "2", "u-add2k2": "2k-2", "u-add2k1": "2k-1"}.get(algo, "0")
        bound = "(2k-1)*d" + (f" + {beta}" if beta != "0" else "")
        sys.stdout.write(f"{algo:<16} {MIN_K[algo]:>5}  {kind:<10} est <= {bound}\n")
    return EXIT_OK


_HANDLERS = {
    "gen": _cmd_gen,
    "build": _cmd_build,
    "query": _cmd_query,
    "audit": _cmd_audit,
    "bench": _cmd_bench,
    "info": _cmd_info,
}


def run(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on --help (0) and bad usage (2)
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return _HANDLERS[args.verb](args)
    except (GraphFormatError, SerializeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
