import numpy as np
import pytest

from edgepart.graph import (DistributedGraph, Graph, GraphFormatError,
                            build_spmv_graph, build_subgraph,
                            distribute_edge_balanced, generate,
                            load_edge_list, load_metis, parse_instance,
                            sort_adjacency, write_edge_list, write_metis)

from conftest import graph_from_edges, k3, p3, random_corpus


# -- METIS format -----------------------------------------------------------

def test_load_metis_triangle(tmp_path):
    path = tmp_path / "k3.graph"
    path.write_text("3 3\n2 3\n1 3\n1 2\n")
    g = load_metis(path)
    assert g.n == 3 and g.m == 3
    assert g == k3()


def test_load_metis_path(tmp_path):
    path = tmp_path / "p3.graph"
    path.write_text("3 2\n2\n1 3\n2\n")
    g = load_metis(path)
    assert g == p3()


def test_load_metis_asymmetric(tmp_path):
    path = tmp_path / "bad.graph"
    path.write_text("3 2\n2\n1 3\n1\n")
    with pytest.raises(GraphFormatError, match="asymmetric adjacency"):
        load_metis(path)


def test_load_metis_self_loop(tmp_path):
    path = tmp_path / "bad.graph"
    path.write_text("2 2\n1 2\n1\n")
    with pytest.raises(GraphFormatError, match="self-loop"):
        load_metis(path)


def test_load_metis_malformed_header(tmp_path):
    path = tmp_path / "bad.graph"
    path.write_text("3\n")
    with pytest.raises(GraphFormatError, match="header"):
        load_metis(path)


def test_load_metis_bad_weight(tmp_path):
    path = tmp_path / "bad.graph"
    path.write_text("2 1 1\n2 0\n1 0\n")
    with pytest.raises(GraphFormatError, match="weight"):
        load_metis(path)


def test_load_metis_edge_count_mismatch(tmp_path):
    path = tmp_path / "bad.graph"
    path.write_text("3 3\n2\n1 3\n2\n")
    with pytest.raises(GraphFormatError, match="directed edges"):
        load_metis(path)


def test_metis_round_trip(tmp_path):
    for i, g in enumerate(random_corpus(10, seed=5)):
        path = tmp_path / f"g{i}.graph"
        write_metis(g, path)
        assert load_metis(path) == g


def test_metis_round_trip_weighted(tmp_path):
    g = Graph.from_undirected(
        3, [(0, 1), (1, 2)], und_weights=[2.0, 5.0],
        node_weights=[1.0, 3.0, 1.0])
    path = tmp_path / "w.graph"
    write_metis(g, path)
    back = load_metis(path)
    assert back == g
    assert back.edge_weights is not None and back.node_weights is not None


def test_metis_comment_lines(tmp_path):
    path = tmp_path / "c.graph"
    path.write_text("% a comment\n3 2\n2\n1 3\n2\n")
    assert load_metis(path) == p3()


# -- edge list format --------------------------------------------------------

def test_edge_list_dedup(tmp_path):
    path = tmp_path / "p3.txt"
    path.write_text("0 1\n1 0\n1 2\n")
    assert load_edge_list(path) == p3()


def test_edge_list_self_loop(tmp_path):
    path = tmp_path / "l.txt"
    path.write_text("0 0\n")
    with pytest.raises(GraphFormatError, match="self-loop"):
        load_edge_list(path)


def test_edge_list_star(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("# star\n0 1\n0 2\n0 3\n0 4\n")
    g = load_edge_list(path)
    assert g.n == 5 and g.m == 4
    assert g == generate("star", {"leaves": 4})


def test_edge_list_bad_id(tmp_path):
    path = tmp_path / "b.txt"
    path.write_text("0 -2\n")
    with pytest.raises(GraphFormatError, match="non-negative integer"):
        load_edge_list(path)


def test_edge_list_round_trip(tmp_path):
    g = random_corpus(1, seed=9)[0]
    path = tmp_path / "g.el"
    write_edge_list(g, path)
    assert load_edge_list(path) == g


# -- sorting and structural invariants ---------------------------------------

def test_sort_adjacency_basic():
    g = Graph.from_adjacency([[3, 1, 2], [0], [0], [0]])
    s = sort_adjacency(g)
    assert s.neighbors(0).tolist() == [1, 2, 3]
    assert sort_adjacency(s) is s  # idempotent


def test_sort_adjacency_keeps_weights_aligned():
    g = Graph.from_adjacency([[2, 1], [0], [0]],
                             edge_weight_lists=[[5.0, 7.0], [7.0], [5.0]])
    s = sort_adjacency(g)
    assert s.neighbors(0).tolist() == [1, 2]
    assert s.edge_weights[s.offsets[0]:s.offsets[1]].tolist() == [7.0, 5.0]


def test_sorted_adjacency_groups_targets_by_owner():
    g = sort_adjacency(generate("erdos_renyi", {"n": 100, "p": 0.08}, seed=2))
    for p in (2, 3, 5, 8):
        dist = distribute_edge_balanced(g, p)
        for v in range(g.n):
            owners = dist.owner_array(g.neighbors(v))
            # same-owner neighbors must form contiguous runs
            changes = np.count_nonzero(np.diff(owners))
            assert changes == len(np.unique(owners)) - 1 or len(owners) == 0


def test_rejects_parallel_edges():
    with pytest.raises(GraphFormatError, match="parallel"):
        Graph.from_adjacency([[1, 1], [0, 0]])


def test_rejects_asymmetric():
    with pytest.raises(GraphFormatError, match="asymmetric"):
        Graph.from_adjacency([[1], []])


# -- distribution -------------------------------------------------------------

def test_distribute_exact_split():
    g = graph_from_edges(4, [(0, 1), (1, 2), (1, 3), (2, 3)])
    assert g.degrees.tolist() == [1, 3, 2, 2]
    dist = distribute_edge_balanced(g, 2)
    assert dist.starts.tolist() == [0, 2, 4]
    assert dist.edge_counts.tolist() == [4, 4]


def test_distribute_star():
    g = generate("star", {"leaves": 4})
    dist = distribute_edge_balanced(g, 2)
    assert dist.node_range(0) == (0, 1)
    assert dist.node_range(1) == (1, 5)
    assert dist.edge_counts.tolist() == [4, 4]


def test_distribute_identity():
    g = k3()
    dist = distribute_edge_balanced(g, 1)
    assert dist.starts.tolist() == [0, 3]
    assert dist.edge_counts.tolist() == [6]


def test_distribute_rejects_bad_p():
    with pytest.raises(ValueError):
        distribute_edge_balanced(k3(), 0)


def test_distribute_covers_and_conserves():
    g = sort_adjacency(generate("erdos_renyi", {"n": 23, "p": 0.3}, seed=4))
    for p in range(1, g.n + 1):
        dist = distribute_edge_balanced(g, p)
        assert dist.starts[0] == 0 and dist.starts[-1] == g.n
        assert np.all(np.diff(dist.starts) >= 0)
        assert int(dist.edge_counts.sum()) == g.num_directed


def test_distribute_more_pes_than_nodes_flags_empty():
    g = p3()
    dist = distribute_edge_balanced(g, 5)
    assert dist.num_pes == 5
    assert dist.has_empty_pe


# -- subgraphs ----------------------------------------------------------------

def test_subgraph_k3_three_pes():
    g = k3()
    dist = distribute_edge_balanced(g, 3)
    dg = build_subgraph(g, dist, 0)
    assert dg.local_count == 1
    assert dg.ghost_count == 2
    assert dg.local_edge_count == 2


def test_subgraph_p3():
    g = p3()
    dist = distribute_edge_balanced(g, 2)
    assert dist.node_range(0) == (0, 1)
    dg = build_subgraph(g, dist, 1)
    assert dg.local_count == 2
    assert dg.ghost_global_ids.tolist() == [0]
    assert dg.ghost_pe.tolist() == [0]
    assert dg.ghost_lookup[0] == dg.local_count


def test_subgraph_ghosts_in_first_appearance_order():
    g = sort_adjacency(generate("erdos_renyi", {"n": 40, "p": 0.2}, seed=8))
    dist = distribute_edge_balanced(g, 4)
    for pe in range(4):
        dg = build_subgraph(g, dist, pe)
        seen: list[int] = []
        a, b = dist.node_range(pe)
        for v in range(a, b):
            for t in g.neighbors(v):
                if (t < a or t >= b) and t not in seen:
                    seen.append(int(t))
        assert dg.ghost_global_ids.tolist() == seen


def test_subgraph_reassembly():
    g = sort_adjacency(generate("erdos_renyi", {"n": 200, "p": 0.04}, seed=3))
    expected = set(zip(g.sources().tolist(), g.targets.tolist()))
    for p in (1, 2, 3, 4, 7):
        got = set()
        dist = distribute_edge_balanced(g, p)
        locals_total = 0
        for pe in range(p):
            dg = build_subgraph(g, dist, pe)
            locals_total += dg.local_count
            src, tgt = dg.edges_global()
            got.update(zip(src.tolist(), tgt.tolist()))
        assert locals_total == g.n
        assert got == expected


# -- derived graphs and generators --------------------------------------------

def test_spmv_k3():
    s = build_spmv_graph(k3())
    assert s.n == 6 and s.m == 6


def test_spmv_p3():
    s = build_spmv_graph(p3())
    assert s.n == 6 and s.m == 4
    assert set(map(tuple, s.edge_pairs().tolist())) == {
        (0, 4), (1, 3), (1, 5), (2, 4)}


def test_spmv_empty():
    g = Graph.from_undirected(3, np.zeros((0, 2), dtype=np.int64))
    s = build_spmv_graph(g)
    assert s.n == 6 and s.m == 0


def test_generate_ring():
    g = generate("ring", {"n": 5})
    assert g.n == 5 and g.m == 5


def test_generate_grid_edge_count():
    g = generate("grid", {"rows": 2, "cols": 3})
    assert g.n == 6
    assert g.m == 2 * (3 - 1) + 3 * (2 - 1)


def test_generate_er_deterministic():
    a = generate("erdos_renyi", {"n": 50, "p": 0.1}, seed=1)
    b = generate("erdos_renyi", {"n": 50, "p": 0.1}, seed=1)
    assert a == b


def test_generate_rejects_bad_params():
    with pytest.raises(ValueError):
        generate("grid", {"rows": 0, "cols": 3})
    with pytest.raises(ValueError):
        generate("erdos_renyi", {"n": 10, "p": 1.5})
    with pytest.raises(ValueError):
        generate("ring", {"n": 2})


def test_parse_instance_specs():
    assert parse_instance("ring:6").m == 6
    assert parse_instance("grid:2x3").m == 7
    assert parse_instance("star:4").n == 5
    assert parse_instance("er:30:0.2:5") == generate(
        "erdos_renyi", {"n": 30, "p": 0.2}, seed=5)
