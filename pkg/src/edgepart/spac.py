"""Split-graph construction.

Every directed edge of the input graph becomes a split node. The d(v) split
nodes of a node v form a cycle of auxiliary (weight-1) edges (a single edge
for d(v) = 2, nothing for d(v) <= 1), and each undirected input edge induces
one dominant edge between the matching split nodes of its two endpoints.
Dominant edges carry an infinite weight, represented here as a tag rather
than a number. Provides a sequential reference builder, a distributed
builder over the superstep runtime, and a validity checker usable as a test
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import DistributedGraph, Graph
from .runtime import MessageStats, PeContext, prefix_sum_steps, run_supersteps

__all__ = [
    "TAG_AUXILIARY",
    "TAG_DOMINANT",
    "DOMINANT_EXPORT_WEIGHT",
    "SplitGraph",
    "SplitShard",
    "ProtocolError",
    "ValidationReport",
    "build_split_graph_sequential",
    "build_split_graph_distributed",
    "gather_split_shards",
    "validate_split_graph",
    "validate_split_edges",
    "write_metis_split",
]

TAG_AUXILIARY = 0
TAG_DOMINANT = 1

# Stand-in for the infinite dominant-edge weight, used only in file exports.
DOMINANT_EXPORT_WEIGHT = 10 ** 9


class ProtocolError(RuntimeError):
    """The first-edge exchange produced an inconsistent table."""


@dataclass(eq=False)
class SplitGraph:
    """Undirected split graph with global split-node IDs 0 .. 2m-1.

    ``dominant[i]`` is the (lo, hi) split-node pair induced by the i-th
    canonical undirected edge of the input graph, so edge partitions project
    by index. ``auxiliary`` holds the intra-set cycle edges as sorted
    (lo, hi) rows in lexicographic order. ``origin_node[s]`` is the input
    node whose split set contains split node ``s``.
    """

    num_nodes: int
    origin_node: np.ndarray
    dominant: np.ndarray
    auxiliary: np.ndarray

    @property
    def num_dominant(self) -> int:
        return len(self.dominant)

    @property
    def num_auxiliary(self) -> int:
        return len(self.auxiliary)

    @property
    def num_edges(self) -> int:
        return self.num_dominant + self.num_auxiliary

    def directed(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All edges in both directions as (src, dst, tag) arrays."""
        und_src = np.concatenate([self.dominant[:, 0], self.auxiliary[:, 0]])
        und_dst = np.concatenate([self.dominant[:, 1], self.auxiliary[:, 1]])
        tag = np.concatenate([
            np.full(self.num_dominant, TAG_DOMINANT, dtype=np.int8),
            np.full(self.num_auxiliary, TAG_AUXILIARY, dtype=np.int8),
        ])
        src = np.concatenate([und_src, und_dst])
        dst = np.concatenate([und_dst, und_src])
        return src, dst, np.concatenate([tag, tag])

    def to_graph(self) -> Graph:
        """Adjacency-array view with the export weight in place of infinity."""
        pairs = np.concatenate([self.dominant, self.auxiliary]) \
            if self.num_edges else np.zeros((0, 2), dtype=np.int64)
        weights = np.concatenate([
            np.full(self.num_dominant, float(DOMINANT_EXPORT_WEIGHT)),
            np.ones(self.num_auxiliary, dtype=np.float64),
        ])
        return Graph.from_undirected(self.num_nodes, pairs, und_weights=weights)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SplitGraph):
            return NotImplemented
        return (self.num_nodes == other.num_nodes
                and np.array_equal(self.origin_node, other.origin_node)
                and np.array_equal(self.dominant, other.dominant)
                and np.array_equal(self.auxiliary, other.auxiliary))

    def __repr__(self) -> str:
        return (f"SplitGraph(n'={self.num_nodes}, dominant={self.num_dominant}, "
                f"auxiliary={self.num_auxiliary})")


@dataclass(eq=False)
class SplitShard:
    """Per-PE output of the distributed builder: directed edges incident to
    the PE's split-node range, plus exchange accounting."""

    pe: int
    node_start: int
    node_count: int
    src: np.ndarray
    dst: np.ndarray
    tag: np.ndarray
    origin_node: np.ndarray
    entries_sent: dict[int, int] = field(default_factory=dict)
    entries_local: int = 0
    work: int = 0

    @property
    def total_entries_sent(self) -> int:
        return sum(self.entries_sent.values())


def _expected_aux_count(degrees: np.ndarray) -> int:
    return int(degrees[degrees >= 3].sum() + np.count_nonzero(degrees == 2))


def _require_sorted(g: Graph) -> None:
    if not g.has_sorted_adjacency():
        raise ValueError("adjacency lists must be sorted by global node ID "
                         "(run sort_adjacency first)")


# ---------------------------------------------------------------------------
# Sequential reference construction
# ---------------------------------------------------------------------------

def build_split_graph_sequential(g: Graph) -> SplitGraph:
    """Reference construction over the whole graph in one address space."""
    _require_sorted(g)
    nd = g.num_directed
    src = g.sources()
    edge_ids = np.arange(nd, dtype=np.int64)

    # Dominant edges pair each directed edge with its reverse. For an edge
    # (u, v) with u < v all of u's edge IDs precede v's, so (e, rev[e]) is
    # already (lo, hi); CSR order of those edges is canonical edge order.
    rev = g.reverse_edges()
    fwd = src < g.targets
    dominant = np.column_stack((edge_ids[fwd], rev[fwd]))

    deg = g.degrees
    dpe = deg[src] if nd else np.zeros(0, dtype=np.int64)
    first = g.offsets[src] if nd else np.zeros(0, dtype=np.int64)
    pos = edge_ids - first
    cyc = dpe >= 2
    nxt = first[cyc] + (pos[cyc] + 1) % dpe[cyc]
    rows = np.column_stack((np.minimum(edge_ids[cyc], nxt),
                            np.maximum(edge_ids[cyc], nxt)))
    auxiliary = np.unique(rows, axis=0) if len(rows) else rows.reshape(0, 2)

    return SplitGraph(num_nodes=nd, origin_node=src.copy(),
                      dominant=dominant.reshape(-1, 2), auxiliary=auxiliary)


# ---------------------------------------------------------------------------
# Distributed construction
# ---------------------------------------------------------------------------

def _first_edge_entries(dg: DistributedGraph, m_global: int):
    """First-edge table entries of one PE: a new entry opens whenever the
    scanned target's owner PE changes, node by node in adjacency order."""
    mp = dg.local_edge_count
    if mp == 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z
    src_local = np.repeat(np.arange(dg.local_count, dtype=np.int64),
                          dg.local_degrees)
    owners = dg.target_owners()
    boundary = np.empty(mp, dtype=bool)
    boundary[0] = True
    boundary[1:] = (src_local[1:] != src_local[:-1]) | (owners[1:] != owners[:-1])
    starts = np.flatnonzero(boundary)
    return (owners[starts],
            src_local[starts] + dg.node_start,
            starts + m_global)


def _dspac_steps(ctx: PeContext, dg: DistributedGraph):
    """Distributed construction program for one PE.

    Four phases: prefix sum over local edge counts, split-node creation via
    global ID arithmetic, first-edge table computation with one batched
    message per adjacent PE, and local insertion of dominant and auxiliary
    edges.
    """
    tg = dg.global_ids(dg.targets) if dg.local_edge_count else np.zeros(0, dtype=np.int64)
    if dg.local_edge_count:
        starts = dg.offsets[1:dg.local_count]  # list boundaries in the edge array
        inc = np.diff(tg) > 0
        bnd = np.zeros(dg.local_edge_count, dtype=bool)
        bnd[starts[starts < dg.local_edge_count]] = True
        if not np.all(inc | bnd[1:]):
            raise ValueError("adjacency lists must be sorted by global node ID")

    mp = int(dg.local_edge_count)
    m_global = yield from prefix_sum_steps(ctx, mp)

    entry_pe, entry_node, entry_val = _first_edge_entries(dg, m_global)
    order = np.argsort(entry_pe, kind="stable")
    entry_pe, entry_node, entry_val = entry_pe[order], entry_node[order], entry_val[order]
    self_keys = np.zeros(0, dtype=np.int64)
    self_vals = np.zeros(0, dtype=np.int64)
    entries_sent: dict[int, int] = {}
    entries_local = 0
    if len(entry_pe):
        dests, cut = np.unique(entry_pe, return_index=True)
        bounds = np.append(cut, len(entry_pe))
        for i, dest in enumerate(dests):
            lo, hi = bounds[i], bounds[i + 1]
            if int(dest) == ctx.pe:
                self_keys, self_vals = entry_node[lo:hi], entry_val[lo:hi]
                entries_local = int(hi - lo)
            else:
                ctx.send(int(dest), (entry_node[lo:hi].copy(),
                                     entry_val[lo:hi].copy()))
                entries_sent[int(dest)] = int(hi - lo)
    yield

    key_parts = [self_keys]
    val_parts = [self_vals]
    for _, payload in ctx.messages():
        key_parts.append(payload[0])
        val_parts.append(payload[1])
    keys = np.concatenate(key_parts)
    vals = np.concatenate(val_parts)
    korder = np.argsort(keys)
    keys, vals = keys[korder], vals[korder]
    if len(keys) > 1 and np.any(keys[1:] == keys[:-1]):
        raise ProtocolError("duplicate first-edge entries for one node")

    # Dominant edge targets: within the run of local edges pointing at the
    # same node, consumption order equals scan order, so the post-increment
    # of the received first-edge value is the rank within that run.
    if mp:
        by_target = np.argsort(tg, kind="stable")
        sorted_t = tg[by_target]
        pos = np.searchsorted(keys, sorted_t)
        if np.any(pos >= len(keys)) or np.any(keys[np.minimum(pos, len(keys) - 1)]
                                              != sorted_t):
            raise ProtocolError("first-edge table lookup miss")
        run_start = np.zeros(mp, dtype=bool)
        run_start[0] = True
        run_start[1:] = sorted_t[1:] != sorted_t[:-1]
        run_first = np.maximum.accumulate(np.where(run_start, np.arange(mp), 0))
        rank = np.arange(mp, dtype=np.int64) - run_first
        dom_dst = np.empty(mp, dtype=np.int64)
        dom_dst[by_target] = vals[pos] + rank
        dom_src = m_global + np.arange(mp, dtype=np.int64)

        src_local = np.repeat(np.arange(dg.local_count, dtype=np.int64),
                              dg.local_degrees)
        deg = dg.local_degrees[src_local]
        first = dg.offsets[src_local]
        ids = np.arange(mp, dtype=np.int64)
        i = ids - first
        cyc = deg >= 2
        nxt = (first + (i + 1) % deg)[cyc] + m_global
        prv_mask = deg >= 3
        prv = (first + (i - 1) % deg)[prv_mask] + m_global
        src = np.concatenate([dom_src, dom_src[cyc], dom_src[prv_mask]])
        dst = np.concatenate([dom_dst, nxt, prv])
        tag = np.concatenate([
            np.full(mp, TAG_DOMINANT, dtype=np.int8),
            np.full(int(cyc.sum()) + int(prv_mask.sum()), TAG_AUXILIARY, dtype=np.int8),
        ])
        origin = src_local + dg.node_start
    else:
        src = dst = np.zeros(0, dtype=np.int64)
        tag = np.zeros(0, dtype=np.int8)
        origin = np.zeros(0, dtype=np.int64)

    rounds = (ctx.num_pes - 1).bit_length()
    work = dg.local_count + 3 * mp + len(entry_pe) + rounds
    return SplitShard(pe=ctx.pe, node_start=m_global, node_count=mp,
                      src=src, dst=dst, tag=tag, origin_node=origin,
                      entries_sent=entries_sent, entries_local=entries_local,
                      work=work)


def build_split_graph_distributed(subgraphs: list[DistributedGraph], *,
                                  workers: int = 1
                                  ) -> tuple[list[SplitShard], MessageStats]:
    """Run the distributed construction on one subgraph per PE."""
    result = run_supersteps(len(subgraphs),
                            lambda ctx: _dspac_steps(ctx, subgraphs[ctx.pe]),
                            workers=workers)
    return result.outputs, result.stats


def gather_split_shards(shards: list[SplitShard]) -> SplitGraph:
    """Reassemble per-PE shards into one split graph under global IDs.

    Fails loudly when the shards do not form an undirected graph, which
    would mean the exchange protocol was violated.
    """
    shards = sorted(shards, key=lambda s: s.node_start)
    origin = np.concatenate([s.origin_node for s in shards]) \
        if shards else np.zeros(0, dtype=np.int64)
    src = np.concatenate([s.src for s in shards]) if shards else np.zeros(0, dtype=np.int64)
    dst = np.concatenate([s.dst for s in shards]) if shards else np.zeros(0, dtype=np.int64)
    tag = np.concatenate([s.tag for s in shards]) if shards else np.zeros(0, dtype=np.int8)

    fwd = np.lexsort((tag, dst, src))
    bwd = np.lexsort((tag, src, dst))
    if (np.any(src[fwd] != dst[bwd]) or np.any(dst[fwd] != src[bwd])
            or np.any(tag[fwd] != tag[bwd])):
        raise ProtocolError("gathered split graph is not undirected")

    keep = src < dst
    usrc, udst, utag = src[keep], dst[keep], tag[keep]
    dom = utag == TAG_DOMINANT
    dom_rows = np.column_stack((usrc[dom], udst[dom]))
    # canonical order: sort dominant edges by their induced input edge
    ou = origin[dom_rows[:, 0]]
    ov = origin[dom_rows[:, 1]]
    order = np.lexsort((np.maximum(ou, ov), np.minimum(ou, ov)))
    dominant = dom_rows[order]

    aux_rows = np.column_stack((usrc[~dom], udst[~dom]))
    if len(aux_rows):
        aorder = np.lexsort((aux_rows[:, 1], aux_rows[:, 0]))
        aux_rows = aux_rows[aorder]
        if np.any(np.all(aux_rows[1:] == aux_rows[:-1], axis=1)):
            raise ProtocolError("duplicate auxiliary edge in gathered split graph")

    return SplitGraph(num_nodes=len(origin), origin_node=origin,
                      dominant=dominant.reshape(-1, 2),
                      auxiliary=aux_rows.reshape(-1, 2))


# ---------------------------------------------------------------------------
# Validation (test oracle)
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __repr__(self) -> str:
        if self.ok:
            return "ValidationReport(ok)"
        return f"ValidationReport({len(self.violations)} violations)"


def validate_split_edges(src: np.ndarray, dst: np.ndarray, tag: np.ndarray,
                         origin_node: np.ndarray, g: Graph,
                         max_report: int = 5) -> ValidationReport:
    """Check a directed split-edge collection against the structure the
    construction promises. Violations are data, not exceptions."""
    rep = ValidationReport()
    n_prime = len(origin_node)
    deg = g.degrees

    if n_prime != g.num_directed:
        rep.violations.append(
            f"split node count {n_prime} != 2m = {g.num_directed}")
    if n_prime == g.num_directed and n_prime:
        counts = np.bincount(origin_node, minlength=g.n)
        bad = np.flatnonzero(counts != deg)
        for v in bad[:max_report]:
            rep.violations.append(
                f"split set of node {v} has {counts[v]} members, expected {deg[v]}")

    directed = set(zip(src.tolist(), dst.tolist(), tag.tolist()))
    if len(directed) != len(src):
        rep.violations.append("duplicate directed split edges")
    missing = 0
    for (a, b, t) in directed:
        if (b, a, t) not in directed:
            missing += 1
            if missing <= max_report:
                rep.violations.append(
                    f"undirectedness violated at edge ({a}, {b}, tag={t})")
    if missing > max_report:
        rep.violations.append(f"... {missing - max_report} more one-directional edges")

    und = {(min(a, b), max(a, b), t) for (a, b, t) in directed}
    dom_pairs = [(a, b) for (a, b, t) in und if t == TAG_DOMINANT]
    aux_pairs = [(a, b) for (a, b, t) in und if t == TAG_AUXILIARY]
    if any(t not in (TAG_AUXILIARY, TAG_DOMINANT) for (_, _, t) in und):
        rep.violations.append("unknown edge tag")

    if len(dom_pairs) != g.m:
        rep.violations.append(
            f"dominant edge count {len(dom_pairs)} != m = {g.m}")
    expected_aux = _expected_aux_count(deg)
    if len(aux_pairs) != expected_aux:
        rep.violations.append(
            f"auxiliary edge count {len(aux_pairs)} != {expected_aux}")

    dom_deg = np.zeros(max(n_prime, 1), dtype=np.int64)
    for a, b in dom_pairs:
        if 0 <= a < n_prime:
            dom_deg[a] += 1
        if 0 <= b < n_prime:
            dom_deg[b] += 1
    bad = np.flatnonzero(dom_deg[:n_prime] != 1) if n_prime else np.zeros(0, int)
    for s in bad[:max_report]:
        rep.violations.append(
            f"dominant multiplicity violated at split node {s} "
            f"(count {dom_deg[s]})")
    if len(bad) > max_report:
        rep.violations.append(f"... {len(bad) - max_report} more split nodes")

    # Dominant edges must biject with the input edges.
    if n_prime == g.num_directed:
        induced = sorted((min(int(origin_node[a]), int(origin_node[b])),
                          max(int(origin_node[a]), int(origin_node[b])))
                         for a, b in dom_pairs
                         if 0 <= a < n_prime and 0 <= b < n_prime)
        expected = sorted(map(tuple, g.edge_pairs().tolist()))
        if induced != expected:
            rep.violations.append(
                "dominant edges do not biject with the input edge set")

    # Auxiliary structure per split set: a cycle for d >= 3, one edge for
    # d = 2, nothing otherwise; edges never cross split sets.
    per_node: dict[int, list[tuple[int, int]]] = {}
    for a, b in aux_pairs:
        if not (0 <= a < n_prime and 0 <= b < n_prime):
            rep.violations.append(f"auxiliary edge endpoint out of range ({a}, {b})")
            continue
        oa, ob = int(origin_node[a]), int(origin_node[b])
        if oa != ob:
            rep.violations.append(
                f"auxiliary edge ({a}, {b}) crosses split sets ({oa} vs {ob})")
            continue
        per_node.setdefault(oa, []).append((a, b))
    if n_prime == g.num_directed:
        for v in range(g.n):
            d = int(deg[v])
            edges = per_node.get(v, [])
            want = d if d >= 3 else (1 if d == 2 else 0)
            if len(edges) != want:
                rep.violations.append(
                    f"split set of node {v} (degree {d}) has {len(edges)} "
                    f"auxiliary edges, expected {want}")
                continue
            if d >= 3:
                adj: dict[int, list[int]] = {}
                for a, b in edges:
                    adj.setdefault(a, []).append(b)
                    adj.setdefault(b, []).append(a)
                if any(len(nb) != 2 for nb in adj.values()) or len(adj) != d:
                    rep.violations.append(
                        f"auxiliary edges of node {v} do not form a cycle")
                    continue
                start = next(iter(adj))
                seen = {start}
                prev, cur = None, start
                while True:
                    nxt = [x for x in adj[cur] if x != prev]
                    if not nxt:
                        break
                    prev, cur = cur, nxt[0]
                    if cur == start:
                        break
                    seen.add(cur)
                if len(seen) != d:
                    rep.violations.append(
                        f"auxiliary edges of node {v} split into multiple cycles")
    return rep


def validate_split_graph(sg: SplitGraph, g: Graph,
                         max_report: int = 5) -> ValidationReport:
    src, dst, tag = sg.directed()
    return validate_split_edges(src, dst, tag, sg.origin_node, g, max_report)


def write_metis_split(sg: SplitGraph, path) -> None:
    """Export as weighted METIS; the header comment documents the stand-in
    weight used for dominant edges."""
    graph = sg.to_graph()
    with open(path, "w") as f:
        f.write(f"% split graph export: dominant edges carry weight "
                f"{DOMINANT_EXPORT_WEIGHT} in place of infinity\n")
        f.write(f"{graph.n} {graph.m} 1\n")
        off, tgt, w = graph.offsets, graph.targets, graph.edge_weights
        for u in range(graph.n):
            parts = []
            for idx in range(off[u], off[u + 1]):
                parts.append(str(tgt[idx] + 1))
                parts.append(str(int(w[idx])))
            f.write(" ".join(parts) + "\n")
