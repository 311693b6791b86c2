"""Node partitioning of split graphs.

Dominant edges are contracted away before partitioning, which turns the
"never cut an infinite-weight edge" rule into a structural guarantee: the
contracted graph has one weight-2 node per input edge, gets a balanced
contiguous prefix partition, is refined with size-constrained label
propagation, and the blocks are expanded back to the split nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .spac import SplitGraph

__all__ = [
    "PartitionConfig",
    "NodePartition",
    "PartitionError",
    "weight_cap",
    "contract_dominant_edges",
    "initial_partition",
    "label_propagation_refine",
    "partition_split_graph",
    "edge_cut",
]

_TOL = 1e-9


class PartitionError(ValueError):
    pass


@dataclass
class PartitionConfig:
    """Knobs of the node partitioner."""

    k: int
    epsilon: float = 0.03
    seed: int = 0
    lp_rounds: int = 10
    node_order: str = "random-shuffle"  # or "sequential"

    def __post_init__(self):
        if self.k < 1:
            raise PartitionError("k must be >= 1")
        if self.epsilon < 0:
            raise PartitionError("epsilon must be >= 0")
        if self.node_order not in ("random-shuffle", "sequential"):
            raise PartitionError(f"unknown node order {self.node_order!r}")


@dataclass(eq=False)
class NodePartition:
    """Assignment of nodes to blocks 0..k-1 with cached block weights.

    ``feasible`` records whether every block respects the weight cap
    (1+eps) * ceil(total/k); infeasible partitions are returned rather than
    rejected, mirroring practical partitioners.
    """

    block: np.ndarray
    k: int
    block_weights: np.ndarray
    feasible: bool


def weight_cap(total: float, k: int, epsilon: float) -> float:
    return (1.0 + epsilon) * math.ceil(total / k)


def contract_dominant_edges(sg: SplitGraph) -> tuple[Graph, np.ndarray]:
    """Contract each dominant edge into one node of weight 2.

    Contracted node i corresponds to dominant edge i (and hence to the i-th
    canonical edge of the input graph). Auxiliary edges become edges between
    contracted nodes; parallel edges merge with summed weight. Returns the
    contracted graph and the split-node -> contracted-node map.
    """
    m = sg.num_dominant
    mapping = np.full(sg.num_nodes, -1, dtype=np.int64)
    counts = np.bincount(sg.dominant.ravel(), minlength=sg.num_nodes) \
        if m else np.zeros(sg.num_nodes, dtype=np.int64)
    if sg.num_nodes and np.any(counts != 1):
        bad = int(np.flatnonzero(counts != 1)[0])
        raise PartitionError(
            f"split node {bad} is incident to {counts[bad]} dominant edges")
    ids = np.arange(m, dtype=np.int64)
    mapping[sg.dominant[:, 0]] = ids
    mapping[sg.dominant[:, 1]] = ids

    if sg.num_auxiliary:
        a = mapping[sg.auxiliary[:, 0]]
        b = mapping[sg.auxiliary[:, 1]]
        rows = np.column_stack((np.minimum(a, b), np.maximum(a, b)))
        uniq, inv = np.unique(rows, axis=0, return_inverse=True)
        weights = np.bincount(inv).astype(np.float64)
    else:
        uniq = np.zeros((0, 2), dtype=np.int64)
        weights = np.zeros(0, dtype=np.float64)
    contracted = Graph.from_undirected(m, uniq, und_weights=weights,
                                       node_weights=np.full(m, 2.0))
    return contracted, mapping


def initial_partition(g: Graph, cfg: PartitionConfig) -> NodePartition:
    """Contiguous prefix split by node-weight prefix sums.

    A node whose weight would overshoot the running target starts the next
    block. Blocks may end up over the cap (flagged infeasible); only a
    single node heavier than the cap itself is an error.
    """
    w = g.effective_node_weights()
    total = float(w.sum())
    if total <= 0:
        raise PartitionError("total node weight must be positive")
    cap = weight_cap(total, cfg.k, cfg.epsilon)
    if w.max() > cap + _TOL:
        raise PartitionError(
            f"node weight {w.max()} exceeds the block cap {cap}")
    cum = np.zeros(g.n + 1, dtype=np.float64)
    np.cumsum(w, out=cum[1:])
    starts = np.empty(cfg.k + 1, dtype=np.int64)
    starts[0] = 0
    starts[cfg.k] = g.n
    prev = 0
    for q in range(1, cfg.k):
        t = total * q / cfg.k
        reach = int(np.searchsorted(cum, t - _TOL, side="left"))
        overshoot = int(np.searchsorted(cum, t + _TOL, side="right")) - 1
        cut = max(prev, min(reach, overshoot, g.n))
        starts[q] = cut
        prev = cut
    block = np.zeros(g.n, dtype=np.int64)
    for q in range(1, cfg.k):
        block[starts[q]:] = q
    bw = np.bincount(block, weights=w, minlength=cfg.k).astype(np.float64)
    return NodePartition(block=block, k=cfg.k, block_weights=bw,
                         feasible=bool(np.all(bw <= cap + _TOL)))


def label_propagation_refine(g: Graph, part: NodePartition,
                             cfg: PartitionConfig) -> NodePartition:
    """Size-constrained label propagation.

    Visits nodes for up to ``lp_rounds`` rounds (shuffled order re-seeded
    per round) and moves each to the eligible block maximizing the incident
    edge weight, ranked by (gain, lower block ID); a block is eligible when
    its weight plus the node's stays under the cap. The winner can tie the
    current block's gain, so the cut never increases but plateau moves are
    allowed. Stops early on a round without moves.
    """
    k = cfg.k
    w = g.effective_node_weights()
    cap = weight_cap(float(w.sum()), k, cfg.epsilon)
    block = part.block.copy()
    bw = np.bincount(block, weights=w, minlength=k).astype(np.float64)
    off, tgt = g.offsets, g.targets
    ew = g.directed_edge_weights()
    n = g.n
    for rnd in range(cfg.lp_rounds):
        if cfg.node_order == "random-shuffle":
            order = np.random.default_rng([cfg.seed, rnd]).permutation(n)
        else:
            order = range(n)
        moves = 0
        for v in order:
            beg, end = off[v], off[v + 1]
            if beg == end:
                continue
            gains: dict[int, float] = {}
            for idx in range(beg, end):
                b = block[tgt[idx]]
                gains[b] = gains.get(b, 0.0) + ew[idx]
            cur = block[v]
            wv = w[v]
            best_b = None
            best_gain = -1.0
            for b in sorted(gains):
                if b != cur and bw[b] + wv > cap + _TOL:
                    continue
                if gains[b] > best_gain:
                    best_b, best_gain = b, gains[b]
            if best_b is None:
                # every block holding a neighbor is capped and the current
                # block holds none: the maximizing blocks are the zero-gain
                # ones, lowest eligible ID first
                for b in range(cur):
                    if b not in gains and bw[b] + wv <= cap + _TOL:
                        best_b = b
                        break
                if best_b is None:
                    best_b = cur
            if best_b != cur:
                bw[cur] -= wv
                bw[best_b] += wv
                block[v] = best_b
                moves += 1
        if moves == 0:
            break
    return NodePartition(block=block, k=k, block_weights=bw,
                         feasible=bool(np.all(bw <= cap + _TOL)))


def partition_split_graph(sg: SplitGraph, cfg: PartitionConfig) -> NodePartition:
    """Partition split nodes so that no dominant edge is ever cut.

    Contracts dominant edges, runs the prefix split plus label propagation
    on the contracted graph, and expands blocks back: both endpoints of a
    dominant edge inherit the contracted node's block.
    """
    if sg.num_nodes == 0:
        return NodePartition(block=np.zeros(0, dtype=np.int64), k=cfg.k,
                             block_weights=np.zeros(cfg.k), feasible=True)
    contracted, mapping = contract_dominant_edges(sg)
    part = initial_partition(contracted, cfg)
    part = label_propagation_refine(contracted, part, cfg)
    return NodePartition(block=part.block[mapping], k=cfg.k,
                         block_weights=part.block_weights.copy(),
                         feasible=part.feasible)


def edge_cut(g: Graph, part: NodePartition) -> float:
    """Total weight of edges with endpoints in distinct blocks, each
    undirected edge counted once."""
    pairs = g.edge_pairs()
    if not len(pairs):
        return 0.0
    w = g.undirected_edge_weights()
    cut = part.block[pairs[:, 0]] != part.block[pairs[:, 1]]
    return float(w[cut].sum())
