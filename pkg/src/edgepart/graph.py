"""Graph containers, METIS/edge-list I/O, synthetic generators, and the
edge-balanced distribution of a graph onto virtual PEs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Graph",
    "Distribution",
    "DistributedGraph",
    "GraphFormatError",
    "load_metis",
    "write_metis",
    "load_edge_list",
    "write_edge_list",
    "sort_adjacency",
    "distribute_edge_balanced",
    "build_subgraph",
    "build_spmv_graph",
    "generate",
    "parse_instance",
]


class GraphFormatError(ValueError):
    """Malformed or inconsistent graph input."""


def _format_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


class Graph:
    """Simple undirected graph in adjacency-array form.

    Both directions of every undirected edge are stored explicitly; the
    directed edges leaving node ``v`` occupy the consecutive ID range
    ``offsets[v] .. offsets[v+1] - 1``. Self-loops and parallel edges are
    rejected. Adjacency lists keep their construction order; call
    :func:`sort_adjacency` to sort them by target ID. Instances are
    immutable by convention and safe to share across threads.
    """

    __slots__ = ("offsets", "targets", "edge_weights", "node_weights", "_cache")

    def __init__(self, offsets, targets, edge_weights=None, node_weights=None,
                 check: bool = True):
        self.offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        self.targets = np.ascontiguousarray(targets, dtype=np.int64)
        self.edge_weights = (None if edge_weights is None else
                             np.ascontiguousarray(edge_weights, dtype=np.float64))
        self.node_weights = (None if node_weights is None else
                             np.ascontiguousarray(node_weights, dtype=np.float64))
        self._cache: dict = {}
        if check:
            self._validate()

    # -- construction -------------------------------------------------------

    @classmethod
    def from_undirected(cls, n: int, pairs, und_weights=None, node_weights=None,
                        check: bool = True) -> "Graph":
        """Build a graph from unique undirected (u, v) pairs.

        Adjacency lists come out sorted by target ID.
        """
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        m = len(pairs)
        src = np.concatenate([pairs[:, 0], pairs[:, 1]])
        tgt = np.concatenate([pairs[:, 1], pairs[:, 0]])
        if und_weights is not None:
            w = np.asarray(und_weights, dtype=np.float64)
            w = np.concatenate([w, w])
        else:
            w = None
        order = np.lexsort((tgt, src))
        src, tgt = src[order], tgt[order]
        if w is not None:
            w = w[order]
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=offsets[1:])
        return cls(offsets, tgt, w, node_weights, check=check)

    @classmethod
    def from_adjacency(cls, lists, edge_weight_lists=None, node_weights=None) -> "Graph":
        """Build from per-node neighbor lists, preserving list order."""
        offsets = np.zeros(len(lists) + 1, dtype=np.int64)
        np.cumsum([len(a) for a in lists], out=offsets[1:])
        targets = np.concatenate([np.asarray(a, dtype=np.int64) for a in lists]) \
            if offsets[-1] else np.zeros(0, dtype=np.int64)
        weights = None
        if edge_weight_lists is not None:
            weights = np.concatenate([np.asarray(a, dtype=np.float64)
                                      for a in edge_weight_lists]) \
                if offsets[-1] else np.zeros(0, dtype=np.float64)
        return cls(offsets, targets, weights, node_weights)

    # -- basic queries -------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.offsets) - 1

    @property
    def m(self) -> int:
        return len(self.targets) // 2

    @property
    def num_directed(self) -> int:
        return len(self.targets)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.targets[self.offsets[v]:self.offsets[v + 1]]

    def sources(self) -> np.ndarray:
        """Source node of every directed edge, in edge-ID order."""
        if "src" not in self._cache:
            self._cache["src"] = np.repeat(np.arange(self.n, dtype=np.int64),
                                           self.degrees)
        return self._cache["src"]

    def directed_edge_weights(self) -> np.ndarray:
        if self.edge_weights is not None:
            return self.edge_weights
        if "unit_w" not in self._cache:
            self._cache["unit_w"] = np.ones(self.num_directed, dtype=np.float64)
        return self._cache["unit_w"]

    def effective_node_weights(self) -> np.ndarray:
        if self.node_weights is not None:
            return self.node_weights
        return np.ones(self.n, dtype=np.float64)

    def total_edge_weight(self) -> float:
        return float(self.directed_edge_weights().sum() / 2.0)

    def has_sorted_adjacency(self) -> bool:
        if "sorted" not in self._cache:
            if self.num_directed == 0:
                self._cache["sorted"] = True
            else:
                inc = np.diff(self.targets) > 0
                starts = np.zeros(self.num_directed, dtype=bool)
                bounds = self.offsets[1:-1]
                starts[bounds[bounds < self.num_directed]] = True
                self._cache["sorted"] = bool(np.all(inc | starts[1:]))
        return self._cache["sorted"]

    # -- canonical undirected edge indexing ----------------------------------

    def edge_index(self) -> tuple[np.ndarray, np.ndarray]:
        """Canonical undirected edge list and the directed-to-undirected map.

        Returns ``(pairs, dir2und)`` where ``pairs`` is an (m, 2) array of
        (min, max) endpoint pairs in lexicographically sorted order and
        ``dir2und[e]`` is the canonical ID of directed edge ``e``.
        """
        if "edge_index" not in self._cache:
            src, tgt = self.sources(), self.targets
            if self.has_sorted_adjacency():
                # forward edges already appear in canonical order
                fwd = src < tgt
                dir2und = np.empty(self.num_directed, dtype=np.int64)
                ids = np.arange(self.m, dtype=np.int64)
                dir2und[fwd] = ids
                dir2und[self.reverse_edges()[fwd]] = ids
                pairs = np.column_stack((src[fwd], tgt[fwd]))
            else:
                mn = np.minimum(src, tgt)
                mx = np.maximum(src, tgt)
                order = np.lexsort((mx, mn))
                dir2und = np.empty(self.num_directed, dtype=np.int64)
                dir2und[order] = np.arange(self.num_directed, dtype=np.int64) // 2
                pairs = np.column_stack((mn[order[::2]], mx[order[::2]]))
            self._cache["edge_index"] = (pairs, dir2und)
        return self._cache["edge_index"]

    def edge_pairs(self) -> np.ndarray:
        return self.edge_index()[0]

    def undirected_edge_weights(self) -> np.ndarray:
        """Weights aligned with :meth:`edge_pairs` order."""
        if self.edge_weights is None:
            return np.ones(self.m, dtype=np.float64)
        src, tgt = self.sources(), self.targets
        mn = np.minimum(src, tgt)
        mx = np.maximum(src, tgt)
        order = np.lexsort((mx, mn))
        return self.edge_weights[order[::2]]

    def reverse_edges(self) -> np.ndarray:
        """Permutation mapping each directed edge to its reverse."""
        if "rev" not in self._cache:
            src, tgt = self.sources(), self.targets
            rev = np.empty(self.num_directed, dtype=np.int64)
            if self.has_sorted_adjacency():
                # edges are already in (src, tgt) order, so one stable sort
                # by target yields (tgt, src) order; matching ranks pair
                # mutually reverse edges
                by_ts = np.argsort(tgt, kind="stable")
                rev[by_ts] = np.arange(self.num_directed, dtype=np.int64)
            else:
                by_st = np.lexsort((tgt, src))   # sorted by (src, tgt)
                by_ts = np.lexsort((src, tgt))   # sorted by (tgt, src)
                rev[by_ts] = by_st
            self._cache["rev"] = rev
        return self._cache["rev"]

    # -- validation & comparison ---------------------------------------------

    def _validate(self) -> None:
        off, tgt = self.offsets, self.targets
        if len(off) < 1 or off[0] != 0 or np.any(np.diff(off) < 0) or off[-1] != len(tgt):
            raise GraphFormatError("inconsistent offset array")
        n = self.n
        if len(tgt) and (tgt.min() < 0 or tgt.max() >= n):
            raise GraphFormatError("edge target out of range")
        src = self.sources()
        if np.any(src == tgt):
            raise GraphFormatError("self-loop")
        w = self.directed_edge_weights()
        if len(w) != len(tgt):
            raise GraphFormatError("edge weight array length mismatch")
        if len(w) and w.min() <= 0:
            raise GraphFormatError("edge weight must be positive")
        if self.node_weights is not None:
            if len(self.node_weights) != n:
                raise GraphFormatError("node weight array length mismatch")
            if n and self.node_weights.min() < 0:
                raise GraphFormatError("node weight must be non-negative")
        # Symmetry and simplicity: the multiset of (src, tgt) pairs must equal
        # the multiset of (tgt, src) pairs with matching weights wherever the
        # pair is the same, and contain no duplicates.
        fwd = np.lexsort((tgt, src))
        bwd = np.lexsort((src, tgt))
        if np.any(src[fwd] != tgt[bwd]) or np.any(tgt[fwd] != src[bwd]):
            raise GraphFormatError("asymmetric adjacency")
        if np.any(w[fwd] != w[bwd]):
            raise GraphFormatError("asymmetric edge weights")
        if len(tgt) > 1:
            dup = (src[fwd][1:] == src[fwd][:-1]) & (tgt[fwd][1:] == tgt[fwd][:-1])
            if np.any(dup):
                raise GraphFormatError("parallel edges")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (np.array_equal(self.offsets, other.offsets)
                and np.array_equal(self.targets, other.targets)
                and np.array_equal(self.directed_edge_weights(),
                                   other.directed_edge_weights())
                and np.array_equal(self.effective_node_weights(),
                                   other.effective_node_weights()))

    def __hash__(self):  # identity hash; equality is structural
        return id(self)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def load_metis(path) -> Graph:
    """Read a graph in METIS format (1-based IDs, '%' comments).

    Header is ``n m [fmt [ncon]]`` with fmt 1 = edge weights,
    10 = node weights, 11 = both. Raises :class:`GraphFormatError` on a
    malformed header, asymmetric adjacency, self-loops, parallel edges, or
    non-positive weights.
    """
    with open(path) as f:
        lines = [ln for ln in f if not ln.lstrip().startswith("%")]
    if not lines:
        raise GraphFormatError("empty file")
    head = lines[0].split()
    if len(head) < 2 or len(head) > 4:
        raise GraphFormatError(f"malformed header: {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
        fmt = int(head[2]) if len(head) > 2 else 0
        ncon = int(head[3]) if len(head) > 3 else 1
    except ValueError as exc:
        raise GraphFormatError(f"malformed header: {lines[0]!r}") from exc
    if n < 0 or m < 0:
        raise GraphFormatError("negative counts in header")
    if fmt not in (0, 1, 10, 11):
        raise GraphFormatError(f"unsupported fmt code {fmt}")
    if ncon != 1:
        raise GraphFormatError("multi-constraint node weights are not supported")
    has_ew = fmt % 10 == 1
    has_nw = (fmt // 10) % 10 == 1

    body = lines[1:]
    if len(body) < n:
        raise GraphFormatError(f"expected {n} adjacency lines, found {len(body)}")
    if any(ln.strip() for ln in body[n:]):
        raise GraphFormatError("trailing content after adjacency lines")

    adjacency: list[list[int]] = []
    weight_lists: list[list[float]] | None = [] if has_ew else None
    node_weights: list[float] | None = [] if has_nw else None
    for u, line in enumerate(body[:n]):
        tok = line.split()
        pos = 0
        if has_nw:
            if not tok:
                raise GraphFormatError(f"missing node weight on line {u + 2}")
            nw = float(tok[0])
            if nw < 0:
                raise GraphFormatError("node weight must be non-negative")
            node_weights.append(nw)
            pos = 1
        neigh: list[int] = []
        weights: list[float] = []
        step = 2 if has_ew else 1
        rest = tok[pos:]
        if has_ew and len(rest) % 2:
            raise GraphFormatError(f"dangling edge weight on line {u + 2}")
        for i in range(0, len(rest), step):
            try:
                t = int(rest[i])
            except ValueError as exc:
                raise GraphFormatError(f"bad target {rest[i]!r} on line {u + 2}") from exc
            if t < 1 or t > n:
                raise GraphFormatError(f"target {t} out of range on line {u + 2}")
            if t - 1 == u:
                raise GraphFormatError(f"self-loop at node {u + 1}")
            neigh.append(t - 1)
            if has_ew:
                w = float(rest[i + 1])
                if w <= 0:
                    raise GraphFormatError("edge weight must be positive")
                weights.append(w)
        adjacency.append(neigh)
        if has_ew:
            weight_lists.append(weights)

    total = sum(len(a) for a in adjacency)
    if total != 2 * m:
        raise GraphFormatError(
            f"header promises {m} edges but adjacency holds {total} directed edges")
    try:
        return Graph.from_adjacency(adjacency, weight_lists,
                                    np.asarray(node_weights) if has_nw else None)
    except GraphFormatError:
        raise
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def write_metis(g: Graph, path) -> None:
    """Write METIS format; weight fields appear iff the graph carries them."""
    has_ew = g.edge_weights is not None
    has_nw = g.node_weights is not None
    fmt = (10 if has_nw else 0) + (1 if has_ew else 0)
    with open(path, "w") as f:
        head = f"{g.n} {g.m}"
        if fmt:
            head += f" {fmt:02d}" if has_nw else f" {fmt}"
        f.write(head + "\n")
        off, tgt = g.offsets, g.targets
        for u in range(g.n):
            parts: list[str] = []
            if has_nw:
                parts.append(_format_weight(g.node_weights[u]))
            for idx in range(off[u], off[u + 1]):
                parts.append(str(tgt[idx] + 1))
                if has_ew:
                    parts.append(_format_weight(g.edge_weights[idx]))
            f.write(" ".join(parts) + "\n")


def load_edge_list(path) -> Graph:
    """Read 0-based whitespace "u v" pairs ('#' comments), deduplicated and
    symmetrized; adjacency comes out sorted."""
    us: list[int] = []
    vs: list[int] = []
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            tok = s.split()
            if len(tok) != 2:
                raise GraphFormatError(f"expected 'u v' on line {lineno}")
            try:
                u, v = int(tok[0]), int(tok[1])
            except ValueError as exc:
                raise GraphFormatError(
                    f"node ID must be a non-negative integer (line {lineno})") from exc
            if u < 0 or v < 0:
                raise GraphFormatError(
                    f"node ID must be a non-negative integer (line {lineno})")
            if u == v:
                raise GraphFormatError(f"self-loop at node {u} (line {lineno})")
            us.append(u)
            vs.append(v)
    if not us:
        raise GraphFormatError("no edges in file")
    u = np.asarray(us, dtype=np.int64)
    v = np.asarray(vs, dtype=np.int64)
    pairs = np.unique(np.column_stack((np.minimum(u, v), np.maximum(u, v))), axis=0)
    n = int(pairs.max()) + 1
    return Graph.from_undirected(n, pairs)


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w") as f:
        for u, v in g.edge_pairs():
            f.write(f"{u} {v}\n")


def sort_adjacency(g: Graph) -> Graph:
    """Return a graph whose adjacency lists are strictly increasing by
    target ID. Idempotent; returns the input when already sorted."""
    if g.has_sorted_adjacency():
        return g
    order = np.lexsort((g.targets, g.sources()))
    weights = None if g.edge_weights is None else g.edge_weights[order]
    return Graph(g.offsets, g.targets[order], weights, g.node_weights, check=False)


# ---------------------------------------------------------------------------
# Distribution onto PEs
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Distribution:
    """Contiguous node ranges per PE; PE q owns starts[q] .. starts[q+1]-1."""

    starts: np.ndarray
    edge_counts: np.ndarray

    @property
    def num_pes(self) -> int:
        return len(self.starts) - 1

    def node_range(self, pe: int) -> tuple[int, int]:
        """Half-open global node interval owned by ``pe``."""
        return int(self.starts[pe]), int(self.starts[pe + 1])

    def owner(self, v: int) -> int:
        return int(np.searchsorted(self.starts, v, side="right") - 1)

    def owner_array(self, vs: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.starts, vs, side="right") - 1

    @property
    def has_empty_pe(self) -> bool:
        return bool(np.any(np.diff(self.starts) == 0))


def distribute_edge_balanced(g: Graph, p: int) -> Distribution:
    """Split nodes into ``p`` contiguous ranges balancing directed-edge counts.

    Greedy prefix scan: the q-th cut is placed once the running directed-edge
    count reaches ceil(2m*q/p); a node whose degree would overshoot the
    threshold starts the next range instead. Empty ranges only occur for
    p > n or extreme degree skew.
    """
    if p < 1:
        raise ValueError("PE count must be >= 1")
    n = g.n
    total = g.num_directed
    cum = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(g.degrees, out=cum[1:])
    starts = np.empty(p + 1, dtype=np.int64)
    starts[0] = 0
    starts[p] = n
    prev = 0
    for q in range(1, p):
        t = (total * q + p - 1) // p  # ceil(2m*q/p)
        reach = int(np.searchsorted(cum, t, side="left"))
        overshoot = int(np.searchsorted(cum, t, side="right")) - 1
        cut = min(reach, overshoot, n)
        prev = max(prev, cut)
        starts[q] = prev
    edge_counts = cum[starts[1:]] - cum[starts[:-1]]
    return Distribution(starts=starts, edge_counts=edge_counts)


@dataclass(eq=False)
class DistributedGraph:
    """Per-PE subgraph with ghost nodes and local/global ID maps.

    Local nodes occupy local IDs ``0 .. local_count-1`` (global ID minus
    ``node_start``); ghosts follow in order of first appearance. Only local
    nodes carry adjacency; ghost adjacency lists are empty.
    """

    pe: int
    node_start: int
    local_count: int
    offsets: np.ndarray
    targets: np.ndarray
    ghost_global_ids: np.ndarray
    ghost_pe: np.ndarray
    _ghost_lookup: dict | None = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def ghost_count(self) -> int:
        return len(self.ghost_global_ids)

    @property
    def n_p(self) -> int:
        return self.local_count + self.ghost_count

    @property
    def local_edge_count(self) -> int:
        return len(self.targets)

    @property
    def local_degrees(self) -> np.ndarray:
        return np.diff(self.offsets[:self.local_count + 1])

    @property
    def ghost_lookup(self) -> dict:
        if self._ghost_lookup is None:
            self._ghost_lookup = {int(gid): self.local_count + i
                                  for i, gid in enumerate(self.ghost_global_ids)}
        return self._ghost_lookup

    def global_ids(self, local_ids: np.ndarray) -> np.ndarray:
        local_ids = np.asarray(local_ids, dtype=np.int64)
        out = local_ids + self.node_start
        ghost = local_ids >= self.local_count
        if ghost.any():
            out = np.where(ghost,
                           self.ghost_global_ids[np.maximum(local_ids - self.local_count, 0)],
                           out)
        return out

    def target_owners(self) -> np.ndarray:
        """Owner PE of every directed edge's target, in local edge order."""
        if "owners" not in self._cache:
            owners = np.full(self.local_edge_count, self.pe, dtype=np.int64)
            ghost = self.targets >= self.local_count
            if ghost.any():
                owners[ghost] = self.ghost_pe[self.targets[ghost] - self.local_count]
            self._cache["owners"] = owners
        return self._cache["owners"]

    def edges_global(self) -> tuple[np.ndarray, np.ndarray]:
        """(source, target) global IDs of all locally stored directed edges."""
        src = np.repeat(np.arange(self.local_count, dtype=np.int64),
                        self.local_degrees) + self.node_start
        return src, self.global_ids(self.targets)


def build_subgraph(g: Graph, dist: Distribution, pe: int) -> DistributedGraph:
    """Extract the subgraph PE ``pe`` owns: its node range, all incident
    edges, and ghost entries for off-range targets."""
    if pe < 0 or pe >= dist.num_pes:
        raise ValueError(f"PE {pe} out of range")
    a, b = dist.node_range(pe)
    lo, hi = int(g.offsets[a]), int(g.offsets[b])
    local = b - a
    tgt = g.targets[lo:hi]
    offsets_local = g.offsets[a:b + 1] - lo
    ghost_mask = (tgt < a) | (tgt >= b)
    new_targets = tgt - a
    if ghost_mask.any():
        gvals = tgt[ghost_mask]
        uniq, first_idx, inverse = np.unique(gvals, return_index=True,
                                             return_inverse=True)
        appearance = np.argsort(first_idx, kind="stable")
        rank = np.empty(len(uniq), dtype=np.int64)
        rank[appearance] = np.arange(len(uniq), dtype=np.int64)
        new_targets = new_targets.copy()
        new_targets[ghost_mask] = local + rank[inverse]
        ghost_ids = uniq[appearance]
    else:
        ghost_ids = np.zeros(0, dtype=np.int64)
    ghost_pe = dist.owner_array(ghost_ids)
    offsets = np.concatenate([offsets_local,
                              np.full(len(ghost_ids), offsets_local[-1],
                                      dtype=np.int64)])
    return DistributedGraph(pe=pe, node_start=a, local_count=local,
                            offsets=offsets, targets=new_targets,
                            ghost_global_ids=ghost_ids, ghost_pe=ghost_pe)


# ---------------------------------------------------------------------------
# Derived graphs & generators
# ---------------------------------------------------------------------------

def build_spmv_graph(g: Graph) -> Graph:
    """Bipartite locality graph of y = Mx over the adjacency matrix of ``g``:
    row nodes x_i map to 0..n-1, column nodes y_j to n..2n-1, with an edge
    {x_i, y_j} per nonzero M_ij."""
    n = g.n
    pairs = np.column_stack((g.sources(), g.targets + n))
    return Graph.from_undirected(2 * n, pairs)


def generate(kind: str, params: dict, seed: int = 0) -> Graph:
    """Deterministic synthetic test instances.

    kinds: ``ring`` (n), ``grid`` (rows, cols), ``star`` (leaves),
    ``erdos_renyi`` (n, p). The same (kind, params, seed) always yields the
    same graph.
    """
    if kind == "ring":
        n = int(params["n"])
        if n < 3:
            raise ValueError("ring needs n >= 3")
        pairs = [(i, (i + 1) % n) for i in range(n)]
        return Graph.from_undirected(n, [(min(a, b), max(a, b)) for a, b in pairs])
    if kind == "grid":
        rows, cols = int(params["rows"]), int(params["cols"])
        if rows < 1 or cols < 1:
            raise ValueError("grid dimensions must be positive")
        idx = np.arange(rows * cols, dtype=np.int64).reshape(rows, cols)
        right = np.column_stack((idx[:, :-1].ravel(), idx[:, 1:].ravel()))
        down = np.column_stack((idx[:-1, :].ravel(), idx[1:, :].ravel()))
        return Graph.from_undirected(rows * cols, np.concatenate([right, down]))
    if kind == "star":
        leaves = int(params["leaves"])
        if leaves < 1:
            raise ValueError("star needs >= 1 leaf")
        pairs = np.column_stack((np.zeros(leaves, dtype=np.int64),
                                 np.arange(1, leaves + 1, dtype=np.int64)))
        return Graph.from_undirected(leaves + 1, pairs)
    if kind == "erdos_renyi":
        n, prob = int(params["n"]), float(params["p"])
        if n < 1 or not 0.0 <= prob <= 1.0:
            raise ValueError("need n >= 1 and 0 <= p <= 1")
        rng = np.random.default_rng(seed)
        iu, iv = np.triu_indices(n, k=1)
        mask = rng.random(len(iu)) < prob
        pairs = np.column_stack((iu[mask], iv[mask]))
        return Graph.from_undirected(n, pairs)
    raise ValueError(f"unknown generator kind {kind!r}")


_GENERATOR_KINDS = ("ring", "grid", "star", "erdos_renyi", "er")


def parse_instance(spec: str, fmt: str | None = None) -> Graph:
    """Load a graph from a path or build one from a generator spec.

    Generator specs: ``ring:N``, ``star:LEAVES``, ``grid:RxC``,
    ``er:N:P[:SEED]``. Anything else is treated as a file path; METIS is
    assumed unless the extension is .txt/.el/.edges or fmt says otherwise.
    """
    head = spec.split(":", 1)[0]
    if head in _GENERATOR_KINDS and ":" in spec:
        parts = spec.split(":")
        kind = parts[0]
        try:
            if kind == "ring":
                return generate("ring", {"n": int(parts[1])})
            if kind == "star":
                return generate("star", {"leaves": int(parts[1])})
            if kind == "grid":
                r, c = parts[1].lower().split("x")
                return generate("grid", {"rows": int(r), "cols": int(c)})
            if kind in ("er", "erdos_renyi"):
                seed = int(parts[3]) if len(parts) > 3 else 0
                return generate("erdos_renyi",
                                {"n": int(parts[1]), "p": float(parts[2])}, seed)
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad generator spec {spec!r}") from exc
    if fmt == "metis":
        return load_metis(spec)
    if fmt == "edgelist":
        return load_edge_list(spec)
    if fmt is not None:
        raise ValueError(f"unknown format {fmt!r}")
    if str(spec).endswith((".txt", ".el", ".edges", ".edgelist")):
        return load_edge_list(spec)
    return load_metis(spec)
