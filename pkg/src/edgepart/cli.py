"""Command-line front end.

Subcommands: ``partition`` (one instance, one algorithm), ``bench``
(experiment sweep from a JSON spec), ``scale`` (PE scaling study),
``convert`` (format and model conversions), ``oracle`` (brute-force optimum
for tiny instances). EDGEPART_THREADS caps worker parallelism.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench as bench_mod
from .edge_partition import (brute_force_optimal, evaluate,
                             write_edge_partition)
from .graph import (build_spmv_graph, parse_instance, sort_adjacency,
                    write_edge_list, write_metis)
from .hypergraph import export_hmetis, graph_to_hypergraph
from .pipeline import ALGORITHMS, run_algorithm
from .spac import build_split_graph_sequential, write_metis_split


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=float, default=0.03,
                   help="imbalance factor (default 0.03)")
    p.add_argument("--seed", type=int, default=0)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgepart",
        description="Edge partitioning via split-graph construction, with "
                    "baselines and an experiment harness.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="partition one instance")
    p.add_argument("--instance", required=True,
                   help="graph path or generator spec (e.g. er:100:0.05)")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="dspac-lp")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--pes", type=int, default=1)
    p.add_argument("--lp-rounds", type=int, default=10)
    p.add_argument("--jabeja-iterations", type=int, default=100)
    p.add_argument("--jabeja-t0", type=float, default=2.0)
    p.add_argument("--out", required=True, help="partition file (one block per edge)")
    p.add_argument("--report", help="write a JSON quality report here")
    _add_common(p)

    p = sub.add_parser("bench", help="run an experiment sweep")
    p.add_argument("--config", required=True, help="JSON experiment spec")
    p.add_argument("--out", required=True, help="raw result CSV")
    p.add_argument("--summary", help="per-cell arithmetic means CSV")
    p.add_argument("--aggregate", help="geometric-mean summary CSV")
    p.add_argument("--ratios", help="performance-ratio CSV")
    p.add_argument("--ratio-stat", choices=("best", "mean"), default="best")
    p.add_argument("--reps", type=int, help="override repetitions")
    p.add_argument("--keep-going", action="store_true",
                   help="record per-cell failures as rows and continue")

    p = sub.add_parser("scale", help="run one cell on increasing PE counts")
    p.add_argument("--instance", required=True)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="dspac-lp")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--pes", required=True,
                   help="comma-separated ascending PE counts, e.g. 1,2,4,8")
    p.add_argument("--out", required=True)
    _add_common(p)

    p = sub.add_parser("convert", help="convert between formats and models")
    p.add_argument("--instance", required=True)
    p.add_argument("--to", required=True,
                   choices=("metis", "edgelist", "hmetis", "spmv", "split"))
    p.add_argument("--out", required=True)

    p = sub.add_parser("oracle", help="brute-force optimal vertex cut")
    p.add_argument("--instance", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", help="write the witness partition here")
    _add_common(p)
    return parser


def _cmd_partition(args) -> int:
    g = parse_instance(args.instance)
    opts = {}
    if args.algorithm == "dspac-lp":
        opts["lp_rounds"] = args.lp_rounds
    elif args.algorithm == "jabeja-vc":
        opts["iterations"] = args.jabeja_iterations
        opts["initial_temperature"] = args.jabeja_t0
    ep, costs = run_algorithm(args.algorithm, g, args.k, epsilon=args.epsilon,
                              seed=args.seed, pes=args.pes, **opts)
    write_edge_partition(ep, args.out)
    report = evaluate(g, ep, args.epsilon,
                      construction_ms=costs.construction_ms,
                      partition_ms=costs.partition_ms,
                      total_ms=costs.total_ms,
                      messages_sent=costs.messages_sent,
                      message_bytes=costs.message_bytes)
    payload = json.dumps(report.to_dict(), indent=2)
    if args.report:
        with open(args.report, "w") as f:
            f.write(payload + "\n")
    else:
        print(payload)
    return 0


def _cmd_bench(args) -> int:
    spec = bench_mod.ExperimentSpec.from_file(args.config)
    if args.reps:
        spec.repetitions = args.reps
    rows = bench_mod.run_experiment(spec, keep_going=args.keep_going)
    bench_mod.write_rows(rows, args.out)
    if args.summary:
        bench_mod.write_dicts(bench_mod.summarize(rows), args.summary)
    if args.aggregate:
        bench_mod.write_dicts(bench_mod.aggregate(rows), args.aggregate)
    if args.ratios:
        bench_mod.write_dicts(
            bench_mod.performance_ratios(rows, stat=args.ratio_stat),
            args.ratios)
    failures = [r for r in rows if r.error]
    for r in failures:
        print(f"error: {r.instance} {r.algorithm} k={r.k} seed={r.seed}: "
              f"{r.error}", file=sys.stderr)
    if failures and not args.keep_going:
        return 1
    return 0


def _cmd_scale(args) -> int:
    pe_counts = [int(x) for x in args.pes.split(",") if x]
    rows = bench_mod.scaling_run(args.instance, args.algorithm, args.k,
                                 pe_counts, seed=args.seed,
                                 epsilon=args.epsilon)
    bench_mod.write_rows(rows, args.out)
    return 0


def _cmd_convert(args) -> int:
    g = parse_instance(args.instance)
    if args.to == "metis":
        write_metis(g, args.out)
    elif args.to == "edgelist":
        write_edge_list(g, args.out)
    elif args.to == "hmetis":
        export_hmetis(graph_to_hypergraph(g), args.out)
    elif args.to == "spmv":
        write_metis(build_spmv_graph(g), args.out)
    elif args.to == "split":
        write_metis_split(build_split_graph_sequential(sort_adjacency(g)),
                          args.out)
    return 0


def _cmd_oracle(args) -> int:
    g = parse_instance(args.instance)
    cut, ep = brute_force_optimal(g, args.k, args.epsilon)
    print(json.dumps({"optimal_vertex_cut": cut, "k": args.k,
                      "epsilon": args.epsilon}))
    if args.out:
        write_edge_partition(ep, args.out)
    return 0


_COMMANDS = {
    "partition": _cmd_partition,
    "bench": _cmd_bench,
    "scale": _cmd_scale,
    "convert": _cmd_convert,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"edgepart: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
