"""Reference edge partitioners for quality comparison.

All of them emit balanced partitions: the random baseline by construction,
the streaming heuristics through a block-weight cap, and the local search by
only ever swapping the blocks of two edges.
"""

from __future__ import annotations

import math

import numpy as np

from .edge_partition import EdgePartition
from .graph import Graph
from .partition import weight_cap

__all__ = [
    "random_edge_partition",
    "greedy_streaming",
    "degree_weighted_greedy",
    "jabeja_vc",
]

_TOL = 1e-9


def random_edge_partition(g: Graph, k: int, seed: int = 0) -> EdgePartition:
    """Random permutation of the edges dealt round-robin over the blocks,
    so block loads differ by at most one edge."""
    if k < 1:
        raise ValueError("k must be >= 1")
    m = g.m
    rng = np.random.default_rng(seed)
    perm = rng.permutation(m)
    block = np.empty(m, dtype=np.int64)
    block[perm] = np.arange(m, dtype=np.int64) % k
    w = g.undirected_edge_weights()
    bw = np.bincount(block, weights=w, minlength=k).astype(np.float64)
    return EdgePartition(block=block, k=k, block_weights=bw)


def _stream(g: Graph, k: int, seed: int, order, epsilon: float,
            degree_tiebreak: bool) -> EdgePartition:
    if k < 1:
        raise ValueError("k must be >= 1")
    pairs = g.edge_pairs()
    w = g.undirected_edge_weights()
    m = g.m
    cap = weight_cap(float(w.sum()), k, epsilon)
    if order is None:
        order = np.random.default_rng(seed).permutation(m)
    else:
        order = np.asarray(order, dtype=np.int64)
        if len(order) != m:
            raise ValueError("stream order must cover every edge")
    deg = g.degrees
    loads = np.zeros(k, dtype=np.float64)
    blocks_of: list[set[int]] = [set() for _ in range(g.n)]
    block = np.empty(m, dtype=np.int64)

    for e in order.tolist():
        u, v = int(pairs[e, 0]), int(pairs[e, 1])
        su, sv = blocks_of[u], blocks_of[v]
        inter = su & sv
        if inter:
            cand = inter
        elif su and not sv:
            cand = su
        elif sv and not su:
            cand = sv
        elif su and sv:
            cand = su | sv
        else:
            cand = None
        we = w[e]
        uncapped = [b for b in (sorted(cand) if cand is not None else range(k))
                    if loads[b] + we <= cap + _TOL]
        if not uncapped:
            uncapped = [b for b in range(k) if loads[b] + we <= cap + _TOL]
        if degree_tiebreak:
            # prefer blocks reached via the lower-degree endpoint, so the
            # high-degree endpoint is the one that gets replicated
            ref = su if deg[u] < deg[v] else (sv if deg[v] < deg[u] else su)
            choice = min(uncapped, key=lambda b: (loads[b], b not in ref, b))
        else:
            choice = min(uncapped, key=lambda b: (loads[b], b))
        block[e] = choice
        loads[choice] += we
        su.add(choice)
        sv.add(choice)
    return EdgePartition(block=block, k=k,
                         block_weights=loads.copy())


def greedy_streaming(g: Graph, k: int, seed: int = 0, order=None,
                     epsilon: float = 0.03) -> EdgePartition:
    """Single-pass greedy assignment.

    For each streamed edge {u, v}: pick the least-loaded block among the
    blocks already shared by u and v, else among the one endpoint's blocks,
    else among their union, else globally; blocks at the balance cap are
    skipped (falling back to the globally least-loaded uncapped block).
    Ties go to the lowest block ID.
    """
    return _stream(g, k, seed, order, epsilon, degree_tiebreak=False)


def degree_weighted_greedy(g: Graph, k: int, seed: int = 0, order=None,
                           epsilon: float = 0.03) -> EdgePartition:
    """Greedy streaming with load ties resolved toward the block attached
    via the lower-degree endpoint; identical to plain greedy on tie-free
    streams."""
    return _stream(g, k, seed, order, epsilon, degree_tiebreak=True)


def incidence_lists(g: Graph) -> list[np.ndarray]:
    """Canonical edge IDs incident to each node."""
    _, dir2und = g.edge_index()
    off = g.offsets
    return [dir2und[off[v]:off[v + 1]] for v in range(g.n)]


def swap_delta(incident: list[np.ndarray], pairs: np.ndarray,
               block: np.ndarray, e: int, f: int) -> int:
    """Vertex-cut change if edges ``e`` and ``f`` exchanged blocks.

    Only the four endpoint nodes can change their block sets, so the delta
    is computed from those incidence lists alone.
    """
    be, bf = int(block[e]), int(block[f])
    touched = {int(pairs[e, 0]), int(pairs[e, 1]),
               int(pairs[f, 0]), int(pairs[f, 1])}
    delta = 0
    for v in touched:
        before = set()
        after = set()
        for x in incident[v].tolist():
            b = int(block[x])
            before.add(b)
            if x == e:
                after.add(bf)
            elif x == f:
                after.add(be)
            else:
                after.add(b)
        delta += len(after) - len(before)
    return delta


def jabeja_vc(g: Graph, k: int, seed: int = 0, iterations: int = 100,
              initial_temperature: float = 2.0) -> EdgePartition:
    """Swap-based local search over a random initial edge partition.

    Per iteration, m uniformly sampled edge pairs in different blocks are
    considered; a swap is applied when it lowers the vertex cut or beats the
    current temperature, which decays linearly to zero. Swaps preserve block
    loads exactly, so balance is invariant; the best partition seen is
    returned.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    start = random_edge_partition(g, k, seed)
    m = g.m
    block = start.block.copy()
    pairs, _ = g.edge_index()
    incident = incidence_lists(g)

    cut = sum(len(np.unique(block[inc])) - 1 for inc in incident if len(inc))
    best_block = block.copy()
    best_cut = cut
    rng = np.random.default_rng([seed, 1])

    for it in range(iterations):
        temperature = initial_temperature * (1.0 - it / iterations) \
            if iterations else 0.0
        e_samples = rng.integers(0, m, size=m)
        f_samples = rng.integers(0, m, size=m)
        for e, f in zip(e_samples.tolist(), f_samples.tolist()):
            if block[e] == block[f]:
                continue
            delta = swap_delta(incident, pairs, block, e, f)
            if delta < 0 or delta < temperature:
                block[e], block[f] = block[f], block[e]
                cut += delta
                if cut < best_cut:
                    best_cut = cut
                    best_block = block.copy()
    w = g.undirected_edge_weights()
    bw = np.bincount(best_block, weights=w, minlength=k).astype(np.float64)
    return EdgePartition(block=best_block, k=k, block_weights=bw)
