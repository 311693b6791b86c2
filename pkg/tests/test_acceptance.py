"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Timing fields are excluded from the determinism comparison (wall-clock can
never be bit-identical); everything else in a result row must reproduce
exactly.
"""

import sys
import time
from contextlib import contextmanager

import numpy as np
import pytest

from edgepart.baselines import greedy_streaming, random_edge_partition
from edgepart.bench import ExperimentSpec, run_experiment
from edgepart.edge_partition import (brute_force_optimal, edge_balance,
                                     project_split_partition, vertex_cut)
from edgepart.graph import (build_subgraph, distribute_edge_balanced, generate,
                            parse_instance, sort_adjacency)
from edgepart.hypergraph import connectivity_metric, graph_to_hypergraph
from edgepart.partition import PartitionConfig, partition_split_graph
from edgepart.pipeline import dspac_lp, run_algorithm
from edgepart.spac import (SplitGraph, build_split_graph_distributed,
                           build_split_graph_sequential, gather_split_shards,
                           validate_split_edges, validate_split_graph)

from conftest import c4, k14, k3, p3, random_corpus, tiny_mixed_corpus

PE_COUNTS = (1, 2, 3, 4, 8, 16)


@contextmanager
def criterion(name: str):
    from conftest import ACCEPTANCE_LINES

    start = time.perf_counter()
    info = {}
    try:
        yield info
    except BaseException:
        line = f"[acceptance] {name}: FAIL ({info.get('detail', '')})"
        ACCEPTANCE_LINES.append(line)
        print(line, file=sys.__stdout__, flush=True)
        raise
    elapsed = time.perf_counter() - start
    line = (f"[acceptance] {name}: PASS ({info.get('detail', '')}"
            f" {elapsed:.1f}s)")
    ACCEPTANCE_LINES.append(line)
    print(line, file=sys.__stdout__, flush=True)


def equivalence_corpus():
    return random_corpus(160, seed=101, max_n=64) + \
        random_corpus(40, seed=202, max_n=512)


def distributed_split(g, p, workers=1):
    dist = distribute_edge_balanced(g, p)
    subgraphs = [build_subgraph(g, dist, pe) for pe in range(p)]
    shards, stats = build_split_graph_distributed(subgraphs, workers=workers)
    return dist, shards, stats


def test_c01_sequential_distributed_equivalence():
    with criterion("sequential-distributed-equivalence") as info:
        t0 = time.perf_counter()
        corpus = equivalence_corpus()
        assert len(corpus) >= 200
        checked = 0
        for g in corpus:
            seq = build_split_graph_sequential(g)
            for p in PE_COUNTS:
                _, shards, _ = distributed_split(g, p)
                assert gather_split_shards(shards) == seq
                checked += 1
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"took {elapsed:.1f}s"
        info["detail"] = f"{len(corpus)} graphs x {len(PE_COUNTS)} PE counts,"


def _drop_one_direction(sg: SplitGraph):
    src, dst, tag = sg.directed()
    keep = np.ones(len(src), dtype=bool)
    keep[0] = False
    return src[keep], dst[keep], tag[keep]


def test_c02_lemma1_suite():
    with criterion("lemma1-validation") as info:
        corpus = random_corpus(200, seed=303, max_n=64)
        for g in corpus:
            assert validate_split_graph(build_split_graph_sequential(g), g).ok
        for g in corpus[:20]:
            for p in (2, 5):
                _, shards, _ = distributed_split(g, p)
                assert validate_split_graph(gather_split_shards(shards), g).ok
        # injected faults must each produce their specific violation
        g = k3()
        sg = build_split_graph_sequential(g)
        src, dst, tag = _drop_one_direction(sg)
        report = validate_split_edges(src, dst, tag, sg.origin_node, g)
        assert any("undirectedness violated" in v for v in report.violations)
        doubled = SplitGraph(num_nodes=sg.num_nodes, origin_node=sg.origin_node,
                             dominant=np.vstack([sg.dominant[:2],
                                                 sg.dominant[1:2]]),
                             auxiliary=sg.auxiliary)
        report = validate_split_graph(doubled, g)
        assert any("dominant multiplicity violated" in v
                   for v in report.violations)
        crossed = SplitGraph(num_nodes=sg.num_nodes, origin_node=sg.origin_node,
                             dominant=sg.dominant,
                             auxiliary=np.array([[0, 3], [2, 3], [4, 5]]))
        report = validate_split_graph(crossed, g)
        assert any("crosses split sets" in v for v in report.violations)
        info["detail"] = f"{len(corpus)} graphs + 3 fault fixtures,"


def test_c03_structural_counts():
    with criterion("structural-counts") as info:
        corpus = random_corpus(120, seed=404, max_n=96) + \
            [p3(), c4(), k14(), k3()]
        for g in corpus:
            sg = build_split_graph_sequential(g)
            deg = g.degrees
            assert sg.num_nodes == 2 * g.m
            assert sg.num_dominant == g.m
            assert sg.num_auxiliary == int(
                deg[deg >= 3].sum() + np.count_nonzero(deg == 2))
        info["detail"] = f"{len(corpus)} instances,"


def test_c04_replica_bound():
    with criterion("replica-bound") as info:
        corpus = random_corpus(30, seed=505, max_n=48)
        trials = 0
        for gi, g in enumerate(corpus):
            sg = build_split_graph_sequential(g)
            for k in (2, 3, 4):
                for seed in range(6):
                    part = partition_split_graph(
                        sg, PartitionConfig(k=k, seed=seed))
                    assert np.all(part.block[sg.dominant[:, 0]]
                                  == part.block[sg.dominant[:, 1]])
                    ep = project_split_partition(sg, part)
                    cut_aux = int(np.count_nonzero(
                        part.block[sg.auxiliary[:, 0]]
                        != part.block[sg.auxiliary[:, 1]]))
                    assert vertex_cut(g, ep) <= cut_aux
                    trials += 1
        assert trials >= 500
        info["detail"] = f"{trials} (graph, k, seed) trials,"


def test_c05_hypergraph_equivalence():
    with criterion("hypergraph-equivalence") as info:
        rng = np.random.default_rng(66)
        corpus = [g for g in random_corpus(60, seed=606, max_n=48)
                  if np.all(g.degrees > 0)][:25]
        assert len(corpus) == 25
        pairs = 0
        for g in corpus:
            h = graph_to_hypergraph(g)
            for _ in range(20):
                k = int(rng.integers(2, 6))
                block = rng.integers(0, k, size=g.m)
                from edgepart.edge_partition import EdgePartition
                ep = EdgePartition(block=block, k=k,
                                   block_weights=np.bincount(
                                       block, minlength=k).astype(float))
                assert connectivity_metric(h, block) == vertex_cut(g, ep)
                pairs += 1
        assert pairs >= 500
        info["detail"] = f"{pairs} (graph, partition) pairs,"


def test_c06_oracle_bounds():
    with criterion("oracle-bounds") as info:
        t0 = time.perf_counter()
        corpus = tiny_mixed_corpus(seed=7) + [p3(), c4(), k14(), k3()]
        cells = 0
        attained = 0
        for g in corpus:
            for k in (2, 3):
                optimum, _ = brute_force_optimal(g, k)
                for name in ("random", "greedy", "greedy-degree", "jabeja-vc"):
                    for seed in (0, 1):
                        ep, _ = run_algorithm(name, g, k, seed=seed)
                        assert vertex_cut(g, ep) >= optimum, (name, k)
                best = None
                for seed in range(5):
                    ep, _, _ = dspac_lp(g, k, seed=seed)
                    cut = vertex_cut(g, ep)
                    assert cut >= optimum
                    best = cut if best is None else min(best, cut)
                cells += 1
                attained += best == optimum
        rate = attained / cells
        elapsed = time.perf_counter() - t0
        assert elapsed < 300.0
        info["detail"] = (f"{cells} cells, optimum attained {rate:.0%},")
        assert rate >= 0.70, f"attainment {rate:.1%}"


def test_c07_balance():
    with criterion("balance") as info:
        instances = ["ring:40", "grid:6x8", "star:25", "er:120:0.06:3"]
        checked = 0
        for inst in instances:
            g = parse_instance(inst)
            for name in ("dspac-lp", "random", "greedy", "greedy-degree",
                         "jabeja-vc"):
                for k in (2, 4, 8):
                    ep, _ = run_algorithm(name, g, k, seed=1)
                    imbalance, feasible = edge_balance(g, ep, 0.03)
                    side = np.bincount(ep.block, minlength=k)
                    cap = (1.0 + 0.03) * np.ceil(g.m / k)
                    assert feasible == bool(side.max() <= cap + 1e-9)
                    if name != "dspac-lp":
                        assert feasible, (inst, name, k)
                    checked += 1
        info["detail"] = f"{checked} emitted partitions,"


def test_c08_baseline_ordering():
    with criterion("baseline-ordering") as info:
        g = generate("erdos_renyi", {"n": 1000, "p": 0.01}, seed=0)
        means = {}
        for name in ("random", "greedy"):
            cuts = [vertex_cut(g, run_algorithm(name, g, 8, seed=s)[0])
                    for s in range(20)]
            means[name] = float(np.mean(cuts))
        dspac_cuts = []
        for s in range(20):
            ep, _, _ = dspac_lp(g, 8, seed=s)
            dspac_cuts.append(vertex_cut(g, ep))
        means["dspac-lp"] = float(np.mean(dspac_cuts))
        info["detail"] = (f"means: random {means['random']:.0f}, "
                          f"greedy {means['greedy']:.0f}, "
                          f"dspac-lp {means['dspac-lp']:.0f},")
        assert means["greedy"] < means["random"]
        assert means["dspac-lp"] < means["greedy"], \
            (f"dSPAC+LP mean {means['dspac-lp']:.0f} is not below greedy "
             f"mean {means['greedy']:.0f}")


def test_c09_construction_linearity():
    import gc

    with criterion("construction-linearity") as info:
        sizes = (224, 317, 448, 633)  # ~1e5, 2e5, 4e5, 8e5 edges
        graphs = [generate("grid", {"rows": s, "cols": s}) for s in sizes]
        build_split_graph_sequential(graphs[-1])  # warm-up, largest arenas
        # interleave the sizes so machine-load phases hit them all equally;
        # clearing the per-graph cache times the full construction each rep
        times = [float("inf")] * len(graphs)
        gc.disable()
        try:
            for _ in range(7):
                for i, g in enumerate(graphs):
                    g._cache.clear()
                    t0 = time.perf_counter()
                    build_split_graph_sequential(g)
                    times[i] = min(times[i], time.perf_counter() - t0)
        finally:
            gc.enable()
        ratios = [b / a for a, b in zip(times, times[1:])]
        assert all(r <= 2.5 for r in ratios), ratios
        work = {}
        for p in (1, 16):
            _, shards, _ = distributed_split(graphs[-1], p)
            work[p] = sum(s.work for s in shards)
        assert work[16] <= 1.5 * work[1], work
        info["detail"] = (f"time ratios {[round(r, 2) for r in ratios]}, "
                          f"work x{work[16] / work[1]:.3f},")


def test_c10_message_accounting():
    with criterion("message-accounting") as info:
        corpus = random_corpus(30, seed=707, max_n=64)
        checked = 0
        for g in corpus:
            for p in (2, 4, 8):
                dist, shards, _ = distributed_split(g, p)
                for pe in range(p):
                    a, b = dist.node_range(pe)
                    expected = 0
                    for v in range(a, b):
                        owners = {int(o)
                                  for o in dist.owner_array(g.neighbors(v))}
                        expected += len(owners - {pe})
                    assert shards[pe].total_entries_sent == expected
                    checked += 1
        info["detail"] = f"{checked} (PE, distribution) checks,"


def test_c11_determinism(monkeypatch):
    with criterion("determinism") as info:
        spec = ExperimentSpec(instances=["grid:6x6", "er:100:0.05:2"],
                              algorithms=["dspac-lp", "greedy"],
                              k_values=[4], repetitions=2, base_seed=3, pes=4)
        timing = ("construction_ms", "partition_ms", "total_ms")

        def stable(rows):
            return [{k: v for k, v in r.__dict__.items() if k not in timing}
                    for r in rows]

        runs = []
        for workers in (1, 4, 1):
            monkeypatch.setenv("EDGEPART_THREADS", str(workers))
            runs.append(stable(run_experiment(spec, max_workers=workers)))
        assert runs[0] == runs[1] == runs[2]
        # the dSPAC runtime itself must also be worker-count independent
        g = sort_adjacency(parse_instance("er:150:0.05:4"))
        blocks = []
        for workers in (1, 4):
            ep, _, _ = dspac_lp(g, 4, seed=9, pes=8, workers=workers)
            blocks.append(ep.block.tolist())
        assert blocks[0] == blocks[1]
        info["detail"] = "3 runs x worker counts {1,4},"
