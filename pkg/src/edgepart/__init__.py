"""Edge partitioning toolkit.

Computes balanced edge partitions of undirected graphs by building a split
graph (one node per directed edge, intra-node auxiliary cycles, infinite-
weight dominant edges), running node partitioning on it, and projecting the
blocks back to the edges. The split-graph construction also runs on a
simulated distributed-memory runtime, one subgraph per virtual PE, and the
toolkit ships streaming and local-search baselines, a hypergraph model
cross-check, and an experiment harness.
"""

from .baselines import (degree_weighted_greedy, greedy_streaming, jabeja_vc,
                        random_edge_partition)
from .bench import ExperimentSpec, ResultRow, performance_ratios, run_experiment
from .edge_partition import (EdgePartition, QualityReport, brute_force_optimal,
                             edge_balance, evaluate, project_split_partition,
                             replication_factor, vertex_cut)
from .graph import (DistributedGraph, Distribution, Graph, GraphFormatError,
                    build_spmv_graph, build_subgraph, distribute_edge_balanced,
                    generate, load_edge_list, load_metis, parse_instance,
                    sort_adjacency, write_metis)
from .hypergraph import (Hypergraph, connectivity_metric, cut_net_metric,
                         export_hmetis, graph_to_hypergraph, import_hmetis)
from .partition import (NodePartition, PartitionConfig, PartitionError,
                        contract_dominant_edges, edge_cut, initial_partition,
                        label_propagation_refine, partition_split_graph)
from .pipeline import ALGORITHMS, dspac_lp, run_algorithm
from .runtime import (MessageStats, PeContext, SuperstepError,
                      all_to_all_exchange, prefix_sum_collective,
                      run_supersteps)
from .spac import (SplitGraph, ValidationReport, build_split_graph_distributed,
                   build_split_graph_sequential, gather_split_shards,
                   validate_split_graph)

__version__ = "0.1.0"
