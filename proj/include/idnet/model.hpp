#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace idnet {

using Coord = std::array<double, 2>;

// ---------------------------------------------------------------------------
// Raw network description, as read from disk and before index resolution.
// ---------------------------------------------------------------------------

struct SupplyNodeInput {
  std::string id;
  double p_fail = 0.0;
  std::optional<Coord> coord;
};

struct DemandNodeInput {
  std::string id;
  std::vector<std::string> supplies;
  std::optional<Coord> coord;
};

struct NetworkInput {
  std::vector<SupplyNodeInput> supply_nodes;
  std::vector<DemandNodeInput> demand_nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  std::optional<std::pair<std::string, std::string>> terminals;
};

struct Violation {
  std::string element;  // id of the offending node/edge, or "" for global
  std::string message;
};

/// Checks every structural invariant. Returns one entry per violation;
/// an empty result means the input can be resolved into a Network.
std::vector<Violation> validate_network(const NetworkInput& input);

// ---------------------------------------------------------------------------
// Resolved network. Immutable after construction; all queries are safe to
// run concurrently.
// ---------------------------------------------------------------------------

struct SupplyNode {
  std::string id;
  double p_fail = 0.0;
  std::optional<Coord> coord;
};

struct DemandNode {
  std::string id;
  std::vector<int> supplies;  // sorted unique indices into supply list
  std::optional<Coord> coord;
};

class Network {
 public:
  /// Resolves ids to indices. Duplicate supply references inside one node
  /// are collapsed; any validation violation raises Error.
  static Network from_input(const NetworkInput& input);

  int demand_count() const { return static_cast<int>(demand_nodes_.size()); }
  int supply_count() const { return static_cast<int>(supply_nodes_.size()); }
  const DemandNode& demand(int v) const { return demand_nodes_[v]; }
  const SupplyNode& supply(int u) const { return supply_nodes_[u]; }

  std::optional<int> demand_index(std::string_view id) const;
  std::optional<int> supply_index(std::string_view id) const;

  /// Neighbors of v, sorted by lexicographic id rank.
  std::span<const int> neighbors(int v) const {
    return {adjacency_[v].data(), adjacency_[v].size()};
  }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool has_edge(int a, int b) const;

  std::optional<std::pair<int, int>> terminals() const { return terminals_; }
  bool has_terminals() const { return terminals_.has_value(); }
  bool is_terminal(int v) const {
    return terminals_ && (terminals_->first == v || terminals_->second == v);
  }
  int source() const;  // throws Error when terminals are unset
  int target() const;

  /// n_d(u): demand nodes listing supply u.
  int demands_served_by(int u) const { return supply_degree_[u]; }
  /// n_d = max_u n_d(u). Zero on a network with no supply references.
  int max_demands_per_supply() const { return max_nd_; }
  /// n_s = max_i |S_i|.
  int max_supplies_per_demand() const { return max_ns_; }

  /// Rank of demand(v).id among all demand ids in lexicographic order.
  /// Every deterministic tie-break in the library compares these ranks.
  int id_rank(int v) const { return id_rank_[v]; }

 private:
  std::vector<SupplyNode> supply_nodes_;
  std::vector<DemandNode> demand_nodes_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::optional<std::pair<int, int>> terminals_;
  std::unordered_map<std::string, int> demand_by_id_;
  std::unordered_map<std::string, int> supply_by_id_;
  std::vector<int> supply_degree_;
  std::vector<int> id_rank_;
  int max_nd_ = 0;
  int max_ns_ = 0;
};

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

struct Path {
  std::vector<int> nodes;  // demand indices, consecutive pairs adjacent

  bool operator==(const Path&) const = default;
};

struct PathPair {
  Path first;
  Path second;
  bool require_node_disjoint = false;
};

/// Violations of the Path invariants (adjacency, distinctness, existence).
std::vector<Violation> check_path(const Network& net, const Path& path);
bool is_valid_path(const Network& net, const Path& path);

/// Violations of the PathPair invariants (shared endpoints, disjoint
/// interiors when required), in addition to per-path checks.
std::vector<Violation> check_pair(const Network& net, const PathPair& pair);

/// Nodes whose failure can disconnect the path: everything except the two
/// endpoint positions and any network terminal.
std::vector<int> interior_nodes(const Network& net, const Path& path);

/// Interiors ordered lexicographically by id rank (used to normalize pairs).
bool path_less(const Network& net, const Path& a, const Path& b);

Path path_from_ids(const Network& net, std::span<const std::string> ids);
std::vector<std::string> path_to_ids(const Network& net, const Path& path);

// ---------------------------------------------------------------------------
// Elementary failure semantics
// ---------------------------------------------------------------------------

/// Failure probability of one demand node: the product of its supplies'
/// p_fail. Terminals never fail and return 0.
double node_failure_probability(const Network& net, int v);
double node_failure_probability(const Network& net, std::string_view id);

/// Sequentially drops interior nodes whose failure event is implied by a
/// retained node (S_j subset of S_i); the first of identical supply sets is
/// kept. Returns the retained interior nodes in path order.
std::vector<int> reduce_redundant(const Network& net, const Path& path);

}  // namespace idnet
