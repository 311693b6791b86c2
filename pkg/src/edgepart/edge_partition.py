"""Edge partitions: projection from split-graph node partitions, the
vertex-cut objective and quality metrics, and a brute-force oracle for tiny
instances."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, asdict

import numpy as np

from .graph import Graph
from .partition import NodePartition, PartitionError, weight_cap
from .spac import SplitGraph

__all__ = [
    "EdgePartition",
    "QualityReport",
    "project_split_partition",
    "vertex_cut",
    "replication_factor",
    "edge_balance",
    "brute_force_optimal",
    "evaluate",
    "write_edge_partition",
    "read_edge_partition",
]

_TOL = 1e-9


@dataclass(eq=False)
class EdgePartition:
    """Block assignment over the canonical undirected edges of a graph."""

    block: np.ndarray
    k: int
    block_weights: np.ndarray
    projection_warnings: int = 0


@dataclass
class QualityReport:
    """Quality and cost figures for one produced edge partition."""

    vertex_cut: int
    replication_factor: float
    max_imbalance: float
    feasible: bool
    construction_ms: float = 0.0
    partition_ms: float = 0.0
    total_ms: float = 0.0
    messages_sent: int = 0
    message_bytes: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def project_split_partition(sg: SplitGraph, part: NodePartition, *,
                            strict: bool = True,
                            edge_weights: np.ndarray | None = None
                            ) -> EdgePartition:
    """Transfer split-node blocks to the input edges via dominant edges.

    In strict mode a cut dominant edge is an error; partitions coming out of
    :func:`~edgepart.partition.partition_split_graph` can never trigger it.
    Lenient mode takes the block of the lower-ID endpoint and counts the
    disagreements.
    """
    a = part.block[sg.dominant[:, 0]]
    b = part.block[sg.dominant[:, 1]]
    mismatch = int(np.count_nonzero(a != b))
    if strict and mismatch:
        raise PartitionError(
            f"{mismatch} dominant edges are cut; cannot project strictly")
    w = np.ones(len(a), dtype=np.float64) if edge_weights is None \
        else np.asarray(edge_weights, dtype=np.float64)
    bw = np.bincount(a, weights=w, minlength=part.k).astype(np.float64)
    return EdgePartition(block=a.copy(), k=part.k, block_weights=bw,
                         projection_warnings=mismatch)


def _incident_block_keys(g: Graph, ep: EdgePartition) -> tuple[np.ndarray, int]:
    """Distinct (node, block) incidences and the non-isolated node count."""
    if len(ep.block) != g.m:
        raise ValueError("edge partition does not cover the graph")
    _, dir2und = g.edge_index()
    src = g.sources()
    keys = src * np.int64(ep.k) + ep.block[dir2und]
    uniq = np.unique(keys)
    non_isolated = int(np.count_nonzero(g.degrees > 0))
    return uniq, non_isolated


def vertex_cut(g: Graph, ep: EdgePartition) -> int:
    """Sum over nodes of (blocks touched - 1); isolated nodes contribute 0.

    Equals the number of vertex replicas the partition requires.
    """
    uniq, non_isolated = _incident_block_keys(g, ep)
    return int(len(uniq) - non_isolated)


def replication_factor(g: Graph, ep: EdgePartition) -> float:
    """Mean number of blocks touching a non-isolated vertex."""
    if g.m == 0:
        raise ValueError("replication factor is undefined for empty graphs")
    uniq, non_isolated = _incident_block_keys(g, ep)
    return len(uniq) / non_isolated


def edge_balance(g: Graph, ep: EdgePartition,
                 epsilon: float) -> tuple[float, bool]:
    """Max block weight relative to ceil(total/k), and whether the
    (1+epsilon) balance constraint holds."""
    w = g.undirected_edge_weights()
    if len(ep.block) != g.m:
        raise ValueError("edge partition does not cover the graph")
    bw = np.bincount(ep.block, weights=w, minlength=ep.k)
    ideal = math.ceil(float(w.sum()) / ep.k) if g.m else 1
    max_imbalance = float(bw.max() / ideal) if ep.k else 0.0
    return max_imbalance, bool(max_imbalance <= 1.0 + epsilon + _TOL)


def brute_force_optimal(g: Graph, k: int, epsilon: float = 0.03
                        ) -> tuple[int, EdgePartition]:
    """Exhaustive minimum vertex cut over balanced edge partitions.

    Enumerates k^(m-1) assignments (the lowest-ID edge is pinned to block 0
    to kill block-relabeling symmetry), guarded to ~1e7 candidates. Only
    feasible partitions compete.
    """
    m = g.m
    if m == 0:
        raise ValueError("graph has no edges")
    if k < 1:
        raise ValueError("k must be >= 1")
    if k ** max(m - 1, 0) > 10_000_000:
        raise ValueError(f"instance too large for brute force (k^{m - 1})")
    w = g.undirected_edge_weights()
    cap = weight_cap(float(w.sum()), k, epsilon)
    if w.max() > cap + _TOL:
        raise ValueError("no feasible partition: an edge exceeds the block cap")

    pairs, dir2und = g.edge_index()
    incident: list[list[int]] = [[] for _ in range(g.n)]
    for e, (u, v) in enumerate(pairs.tolist()):
        incident[u].append(e)
        incident[v].append(e)
    nodes = [lst for lst in incident if lst]

    best_cut = None
    best_assign = None
    wl = w.tolist()
    for rest in itertools.product(range(k), repeat=m - 1):
        assign = (0,) + rest
        loads = [0.0] * k
        ok = True
        for e, b in enumerate(assign):
            loads[b] += wl[e]
            if loads[b] > cap + _TOL:
                ok = False
                break
        if not ok:
            continue
        cut = 0
        for lst in nodes:
            cut += len({assign[e] for e in lst}) - 1
        if best_cut is None or cut < best_cut:
            best_cut = cut
            best_assign = assign
            if best_cut == 0:
                break
    if best_cut is None:
        raise ValueError("no feasible partition found")
    block = np.asarray(best_assign, dtype=np.int64)
    bw = np.bincount(block, weights=w, minlength=k).astype(np.float64)
    return int(best_cut), EdgePartition(block=block, k=k, block_weights=bw)


def evaluate(g: Graph, ep: EdgePartition, epsilon: float = 0.03,
             **costs) -> QualityReport:
    """Bundle the standard quality metrics into a report."""
    imbalance, feasible = edge_balance(g, ep, epsilon)
    return QualityReport(vertex_cut=vertex_cut(g, ep),
                         replication_factor=replication_factor(g, ep),
                         max_imbalance=imbalance, feasible=feasible, **costs)


def write_edge_partition(ep: EdgePartition, path) -> None:
    """One block ID per line, canonical edge order."""
    with open(path, "w") as f:
        for b in ep.block:
            f.write(f"{b}\n")


def read_edge_partition(path, k: int | None = None,
                        weights: np.ndarray | None = None) -> EdgePartition:
    with open(path) as f:
        block = np.asarray([int(line) for line in f if line.strip()],
                           dtype=np.int64)
    if k is None:
        k = int(block.max()) + 1 if len(block) else 1
    w = np.ones(len(block)) if weights is None else np.asarray(weights, float)
    bw = np.bincount(block, weights=w, minlength=k).astype(np.float64)
    return EdgePartition(block=block, k=k, block_weights=bw)
