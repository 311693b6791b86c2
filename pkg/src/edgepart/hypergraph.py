"""Hypergraph model of edge partitioning.

An edge partition of a graph is exactly a node partition of the hypergraph
that has one node per graph edge and one net per graph node (pins: the
incident edges). Under unit weights the connectivity metric of that
hypergraph equals the vertex cut, which the test suite exploits as a
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphFormatError

__all__ = [
    "Hypergraph",
    "graph_to_hypergraph",
    "connectivity_metric",
    "cut_net_metric",
    "export_hmetis",
    "import_hmetis",
]


@dataclass(eq=False)
class Hypergraph:
    """Vertices 0..num_vertices-1 and nets as distinct-pin index arrays."""

    num_vertices: int
    nets: list[np.ndarray]
    vertex_weights: np.ndarray | None = None
    net_weights: np.ndarray | None = None

    def __post_init__(self):
        for i, net in enumerate(self.nets):
            net = np.asarray(net, dtype=np.int64)
            if len(net) < 1:
                raise ValueError(f"net {i} has no pins")
            if len(np.unique(net)) != len(net):
                raise ValueError(f"net {i} has duplicate pins")
            if len(net) and (net.min() < 0 or net.max() >= self.num_vertices):
                raise ValueError(f"net {i} has a pin out of range")
            self.nets[i] = net

    @property
    def num_nets(self) -> int:
        return len(self.nets)

    @property
    def num_pins(self) -> int:
        return sum(len(net) for net in self.nets)

    def effective_net_weights(self) -> np.ndarray:
        if self.net_weights is not None:
            return self.net_weights
        return np.ones(self.num_nets, dtype=np.float64)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.num_vertices == other.num_vertices
                and self.num_nets == other.num_nets
                and all(np.array_equal(a, b) for a, b in zip(self.nets, other.nets))
                and np.array_equal(self.effective_net_weights(),
                                   other.effective_net_weights())
                and np.array_equal(
                    self.vertex_weights if self.vertex_weights is not None
                    else np.ones(self.num_vertices),
                    other.vertex_weights if other.vertex_weights is not None
                    else np.ones(other.num_vertices)))


def graph_to_hypergraph(g: Graph) -> Hypergraph:
    """One hypernode per canonical undirected edge, one net per non-isolated
    node holding its incident edges. Unit weights."""
    _, dir2und = g.edge_index()
    off = g.offsets
    nets = [np.sort(dir2und[off[v]:off[v + 1]])
            for v in range(g.n) if off[v + 1] > off[v]]
    return Hypergraph(num_vertices=g.m, nets=nets)


def _blocks_of(part) -> np.ndarray:
    block = getattr(part, "block", part)
    return np.asarray(block, dtype=np.int64)


def connectivity_metric(h: Hypergraph, part) -> float:
    """Sum over nets of (lambda(e) - 1) * w(e), where lambda(e) counts the
    blocks containing at least one pin of e."""
    block = _blocks_of(part)
    w = h.effective_net_weights()
    total = 0.0
    for net, wt in zip(h.nets, w):
        lam = len(np.unique(block[net]))
        total += (lam - 1) * wt
    return float(total)


def cut_net_metric(h: Hypergraph, part) -> float:
    """Sum of weights of nets spanning more than one block."""
    block = _blocks_of(part)
    w = h.effective_net_weights()
    total = 0.0
    for net, wt in zip(h.nets, w):
        if len(np.unique(block[net])) > 1:
            total += wt
    return float(total)


def _format_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def export_hmetis(h: Hypergraph, path) -> None:
    """hMETIS format: header "net_count vertex_count [fmt]", one 1-based pin
    line per net; fmt 1 adds a leading net weight per line, 10 appends one
    vertex-weight line per vertex, 11 both."""
    has_nw = h.net_weights is not None
    has_vw = h.vertex_weights is not None
    fmt = (1 if has_nw else 0) + (10 if has_vw else 0)
    with open(path, "w") as f:
        head = f"{h.num_nets} {h.num_vertices}"
        if fmt:
            head += f" {fmt:02d}" if fmt >= 10 else f" {fmt}"
        f.write(head + "\n")
        for i, net in enumerate(h.nets):
            parts = []
            if has_nw:
                parts.append(_format_weight(h.net_weights[i]))
            parts.extend(str(p + 1) for p in net)
            f.write(" ".join(parts) + "\n")
        if has_vw:
            for wv in h.vertex_weights:
                f.write(_format_weight(wv) + "\n")


def import_hmetis(path) -> Hypergraph:
    with open(path) as f:
        lines = [ln for ln in f if not ln.lstrip().startswith("%")]
    if not lines:
        raise GraphFormatError("empty file")
    head = lines[0].split()
    if len(head) < 2 or len(head) > 3:
        raise GraphFormatError(f"malformed header: {lines[0]!r}")
    try:
        num_nets, num_vertices = int(head[0]), int(head[1])
        fmt = int(head[2]) if len(head) > 2 else 0
    except ValueError as exc:
        raise GraphFormatError(f"malformed header: {lines[0]!r}") from exc
    if fmt not in (0, 1, 10, 11):
        raise GraphFormatError(f"unsupported fmt code {fmt}")
    has_nw = fmt % 10 == 1
    has_vw = fmt >= 10
    body = [ln for ln in lines[1:] if ln.strip()]
    expected = num_nets + (num_vertices if has_vw else 0)
    if len(body) != expected:
        raise GraphFormatError(
            f"expected {expected} content lines, found {len(body)}")
    nets: list[np.ndarray] = []
    net_weights: list[float] = []
    for i, line in enumerate(body[:num_nets]):
        tok = line.split()
        if has_nw:
            if not tok:
                raise GraphFormatError(f"missing net weight on net {i}")
            wt = float(tok[0])
            if wt <= 0:
                raise GraphFormatError("net weight must be positive")
            net_weights.append(wt)
            tok = tok[1:]
        if not tok:
            raise GraphFormatError(f"net {i} has no pins")
        try:
            pins = np.asarray([int(t) - 1 for t in tok], dtype=np.int64)
        except ValueError as exc:
            raise GraphFormatError(f"bad pin on net {i}") from exc
        if pins.min() < 0 or pins.max() >= num_vertices:
            raise GraphFormatError(f"pin out of range on net {i}")
        nets.append(pins)
    vertex_weights = None
    if has_vw:
        vertex_weights = np.asarray([float(ln.split()[0])
                                     for ln in body[num_nets:]], dtype=np.float64)
        if len(vertex_weights) and vertex_weights.min() <= 0:
            raise GraphFormatError("vertex weight must be positive")
    try:
        return Hypergraph(num_vertices=num_vertices, nets=nets,
                          vertex_weights=vertex_weights,
                          net_weights=np.asarray(net_weights) if has_nw else None)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc
