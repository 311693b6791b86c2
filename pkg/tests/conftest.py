"""Shared corpus builders and independent oracles used across the suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from edgepart.graph import Graph, generate, sort_adjacency

# one line per acceptance criterion, echoed after the run summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def graph_from_edges(n, pairs):
    return Graph.from_undirected(n, np.asarray(pairs, dtype=np.int64))


# small fixed fixtures ------------------------------------------------------

def p3():
    return graph_from_edges(3, [(0, 1), (1, 2)])


def k3():
    return graph_from_edges(3, [(0, 1), (0, 2), (1, 2)])


def c4():
    return graph_from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


def k14():
    return generate("star", {"leaves": 4})


# random corpora ------------------------------------------------------------

def random_graph(rng: np.random.Generator, max_n: int = 64) -> Graph:
    """One mixed-generator instance; always has at least one edge."""
    kind = rng.integers(0, 4)
    if kind == 0:
        n = int(rng.integers(3, max_n + 1))
        return generate("ring", {"n": n})
    if kind == 1:
        rows = int(rng.integers(2, max(3, int(max_n ** 0.5) + 1)))
        cols = int(rng.integers(2, max(3, int(max_n ** 0.5) + 1)))
        return generate("grid", {"rows": rows, "cols": cols})
    if kind == 2:
        # single-leaf stars are excluded: a lone weight-2 contracted node
        # cannot satisfy the k=2 split-graph balance cap
        leaves = int(rng.integers(2, max_n))
        return generate("star", {"leaves": leaves})
    n = int(rng.integers(4, max_n + 1))
    # target mean degree in [2, 8] so instances stay sparse at any n
    p = float(min(1.0, rng.uniform(2.0, 8.0) / max(n - 1, 1)))
    g = generate("erdos_renyi", {"n": n, "p": p}, seed=int(rng.integers(2 ** 31)))
    if g.m < 2:
        return generate("ring", {"n": max(n, 3)})
    return g


def random_corpus(count: int, seed: int = 0, max_n: int = 64) -> list[Graph]:
    rng = np.random.default_rng(seed)
    return [sort_adjacency(random_graph(rng, max_n)) for _ in range(count)]


def tiny_mixed_corpus(seed: int = 7, max_edges: int = 8) -> list[Graph]:
    """Connected graphs with 2..max_edges edges drawn from the same
    generator families the rest of the suite uses, plus random connected
    graphs (spanning tree + extra edges)."""
    graphs: list[Graph] = []
    for n in (3, 4, 5, 6, 7, 8):
        graphs.append(generate("ring", {"n": n}))
    for leaves in (2, 3, 4, 5, 6, 7, 8):
        graphs.append(generate("star", {"leaves": leaves}))
    for rows, cols in ((2, 2), (2, 3), (2, 4)):
        graphs.append(generate("grid", {"rows": rows, "cols": cols}))
    rng = np.random.default_rng(seed)
    while len(graphs) < 40:
        n = int(rng.integers(3, 7))
        pairs = set()
        for i in range(1, n):
            pairs.add((int(rng.integers(0, i)), i))
        extra = int(rng.integers(0, 4))
        candidates = [(a, b) for a in range(n) for b in range(a + 1, n)
                      if (a, b) not in pairs]
        rng.shuffle(candidates)
        for pair in candidates[:extra]:
            pairs.add(pair)
        if len(pairs) <= max_edges:
            graphs.append(graph_from_edges(n, sorted(pairs)))
    return [g for g in graphs if 2 <= g.m <= max_edges]


def small_connected_corpus(max_edges: int = 8, count: int = 40,
                           seed: int = 7) -> list[Graph]:
    """Connected graphs with 2..max_edges edges, distinct up to edge sets."""
    rng = np.random.default_rng(seed)
    seen = set()
    graphs = []
    while len(graphs) < count:
        n = int(rng.integers(3, 7))
        # random spanning tree keeps it connected
        pairs = {(min(i, int(rng.integers(0, i))), max(i, int(rng.integers(0, i))))
                 for i in range(1, n)}
        pairs = set()
        for i in range(1, n):
            j = int(rng.integers(0, i))
            pairs.add((j, i))
        extra = int(rng.integers(0, max_edges - len(pairs) + 1)) \
            if max_edges > len(pairs) else 0
        candidates = [(a, b) for a in range(n) for b in range(a + 1, n)
                      if (a, b) not in pairs]
        rng.shuffle(candidates)
        for pair in candidates[:extra]:
            pairs.add(pair)
        if not 2 <= len(pairs) <= max_edges:
            continue
        key = tuple(sorted(pairs))
        if key in seen:
            continue
        seen.add(key)
        graphs.append(graph_from_edges(n, sorted(pairs)))
    return graphs


# independent oracles -------------------------------------------------------

def oracle_vertex_cut(g: Graph, block) -> int:
    """Second implementation over incidence lists, built from scratch."""
    blocks_per_node = [set() for _ in range(g.n)]
    for e, (u, v) in enumerate(g.edge_pairs().tolist()):
        blocks_per_node[u].add(int(block[e]))
        blocks_per_node[v].add(int(block[e]))
    return sum(len(s) - 1 for s in blocks_per_node if s)


def oracle_edge_cut(g: Graph, block) -> float:
    """Brute-force pairwise recount of the node-partition edge cut."""
    total = 0.0
    w = g.undirected_edge_weights()
    for e, (u, v) in enumerate(g.edge_pairs().tolist()):
        if block[u] != block[v]:
            total += w[e]
    return total


def oracle_best_balanced_bisection(g: Graph, epsilon: float = 0.03) -> float:
    """Minimum edge cut over all feasible 2-partitions, by enumeration."""
    from edgepart.partition import weight_cap

    n = g.n
    w = g.effective_node_weights()
    cap = weight_cap(float(w.sum()), 2, epsilon)
    best = None
    for bits in itertools.product((0, 1), repeat=n - 1):
        block = np.asarray((0,) + bits, dtype=np.int64)
        loads = np.bincount(block, weights=w, minlength=2)
        if loads.max() > cap + 1e-9:
            continue
        cut = oracle_edge_cut(g, block)
        if best is None or cut < best:
            best = cut
    assert best is not None
    return best


@pytest.fixture(scope="session")
def medium_corpus():
    return random_corpus(30, seed=11, max_n=48)
