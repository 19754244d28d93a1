#pragma once

#include <optional>
#include <span>
#include <vector>

#include "idnet/model.hpp"

namespace idnet {

/// Directed node-split graph: demand node v becomes v_in = 2v and
/// v_out = 2v + 1, joined by one arc of the node's traversal length;
/// adjacency arcs have length zero. One transform serves both the
/// single-path search and the disjoint-pair augmenting search.
struct LengthedGraph {
  struct Arc {
    int from;
    int to;
    double length;
  };

  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out;  // arc indices per split node
  std::vector<int> node_arc;          // v -> index of the (v_in, v_out) arc
  std::vector<int> demand_rank;       // split node -> id rank of its demand node

  static int in_node(int v) { return 2 * v; }
  static int out_node(int v) { return 2 * v + 1; }
  static int demand_of(int split) { return split / 2; }
  int split_count() const { return static_cast<int>(out.size()); }

  static LengthedGraph from_network(const Network& net,
                                    std::span<const double> node_lengths);
};

/// Traversal length -ln(1 - p_tilde(v)) per demand node; 0 for terminals.
std::vector<double> node_lengths(const Network& net);

struct MaxCapacityResult {
  Path path;
  std::optional<int> bottleneck;  // nullopt: no interior node (direct edge)
};

/// s-t path maximizing the minimum interior supply count; ties resolved by
/// fewer hops, then the lexicographically smallest id sequence.
MaxCapacityResult max_capacity_path(const Network& net);

struct ReliablePathResult {
  Path path;
  double surrogate_length = 0.0;  // sum of interior node lengths
  bool certain_failure = false;   // an unavoidable node has p_tilde ~ 1
};

/// Shortest s-t path under the transformed node lengths. Its true failure
/// probability is within a factor n_d^{n_s} of the optimum.
ReliablePathResult approx_reliable_path(const Network& net);

struct ReliablePairResult {
  PathPair pair;  // node-disjoint, first path lexicographically smaller
  double total_surrogate_length = 0.0;
};

/// Node-disjoint pair minimizing the summed transformed length, via a
/// shortest augmenting path on the residual graph plus cycle cancellation.
ReliablePairResult reliable_pair_heuristic(const Network& net);

namespace detail {

/// Label-correcting shortest path tolerant of negative arc lengths. Labels
/// order by (distance, hops, lexicographic demand-id sequence). Throws when
/// relaxation fails to converge, which would witness a negative cycle.
struct SearchLabels {
  std::vector<double> dist;
  std::vector<int> hops;
  std::vector<int> parent_arc;
  std::vector<std::vector<int>> seq;  // demand id-rank sequence from source
};

SearchLabels shortest_paths(const LengthedGraph& graph, int source);

/// Split-node sequence of the shortest path to target; empty if unreachable.
std::vector<int> extract_split_path(const LengthedGraph& graph,
                                    const SearchLabels& labels, int target);

}  // namespace detail

}  // namespace idnet
