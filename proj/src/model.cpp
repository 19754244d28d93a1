#include "idnet/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "idnet/errors.hpp"
#include "idnet/prob.hpp"

namespace idnet {

namespace {

bool contains_pair(const std::set<std::pair<std::string, std::string>>& seen,
                   const std::string& a, const std::string& b) {
  return seen.count({a, b}) || seen.count({b, a});
}

// True when sub is a subset of super; both sorted unique.
bool subset_of(const std::vector<int>& sub, const std::vector<int>& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

}  // namespace

std::vector<Violation> validate_network(const NetworkInput& input) {
  std::vector<Violation> out;
  std::set<std::string> supply_ids;
  for (const auto& u : input.supply_nodes) {
    if (!supply_ids.insert(u.id).second)
      out.push_back({u.id, "duplicate supply id"});
    if (!(u.p_fail >= 0.0 && u.p_fail <= 1.0))
      out.push_back({u.id, "p_fail outside [0, 1]"});
  }
  std::set<std::string> demand_ids;
  for (const auto& v : input.demand_nodes) {
    if (!demand_ids.insert(v.id).second)
      out.push_back({v.id, "duplicate demand id"});
    if (supply_ids.count(v.id))
      out.push_back({v.id, "id used by both a demand and a supply node"});
    for (const auto& s : v.supplies)
      if (!supply_ids.count(s))
        out.push_back({v.id, "references unknown supply '" + s + "'"});
  }

  auto is_term = [&](const std::string& id) {
    return input.terminals &&
           (input.terminals->first == id || input.terminals->second == id);
  };
  for (const auto& v : input.demand_nodes) {
    std::set<std::string> uniq(v.supplies.begin(), v.supplies.end());
    if (uniq.empty() && !is_term(v.id))
      out.push_back({v.id, "non-terminal demand node with empty supply set"});
  }

  std::set<std::pair<std::string, std::string>> seen_edges;
  for (const auto& [a, b] : input.edges) {
    std::string label = a + "-" + b;
    if (a == b) out.push_back({label, "self-loop"});
    if (!demand_ids.count(a))
      out.push_back({label, "edge references unknown node '" + a + "'"});
    if (!demand_ids.count(b))
      out.push_back({label, "edge references unknown node '" + b + "'"});
    if (contains_pair(seen_edges, a, b))
      out.push_back({label, "duplicate edge"});
    seen_edges.insert({a, b});
  }

  if (input.terminals) {
    if (!demand_ids.count(input.terminals->first))
      out.push_back({input.terminals->first, "terminal s is not a demand node"});
    if (!demand_ids.count(input.terminals->second))
      out.push_back({input.terminals->second, "terminal t is not a demand node"});
    if (input.terminals->first == input.terminals->second)
      out.push_back({input.terminals->first, "terminals s and t coincide"});
  }
  return out;
}

Network Network::from_input(const NetworkInput& input) {
  auto violations = validate_network(input);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid network:";
    for (const auto& v : violations) msg << " [" << v.element << "] " << v.message << ";";
    throw Error(msg.str());
  }

  Network net;
  net.supply_nodes_.reserve(input.supply_nodes.size());
  for (const auto& u : input.supply_nodes) {
    net.supply_by_id_[u.id] = static_cast<int>(net.supply_nodes_.size());
    net.supply_nodes_.push_back({u.id, u.p_fail, u.coord});
  }
  net.demand_nodes_.reserve(input.demand_nodes.size());
  for (const auto& v : input.demand_nodes) {
    DemandNode node;
    node.id = v.id;
    node.coord = v.coord;
    for (const auto& s : v.supplies) node.supplies.push_back(net.supply_by_id_.at(s));
    std::sort(node.supplies.begin(), node.supplies.end());
    node.supplies.erase(std::unique(node.supplies.begin(), node.supplies.end()),
                        node.supplies.end());
    net.demand_by_id_[v.id] = static_cast<int>(net.demand_nodes_.size());
    net.demand_nodes_.push_back(std::move(node));
  }

  const int n = net.demand_count();
  net.id_rank_.resize(n);
  {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return net.demand_nodes_[a].id < net.demand_nodes_[b].id;
    });
    for (int r = 0; r < n; ++r) net.id_rank_[order[r]] = r;
  }

  net.adjacency_.resize(n);
  for (const auto& [a, b] : input.edges) {
    int ia = net.demand_by_id_.at(a);
    int ib = net.demand_by_id_.at(b);
    net.edges_.emplace_back(ia, ib);
    net.adjacency_[ia].push_back(ib);
    net.adjacency_[ib].push_back(ia);
  }
  for (auto& adj : net.adjacency_)
    std::sort(adj.begin(), adj.end(),
              [&](int a, int b) { return net.id_rank_[a] < net.id_rank_[b]; });

  if (input.terminals)
    net.terminals_ = {net.demand_by_id_.at(input.terminals->first),
                      net.demand_by_id_.at(input.terminals->second)};

  net.supply_degree_.assign(net.supply_count(), 0);
  for (const auto& v : net.demand_nodes_)
    for (int u : v.supplies) ++net.supply_degree_[u];
  net.max_nd_ = net.supply_degree_.empty()
                    ? 0
                    : *std::max_element(net.supply_degree_.begin(), net.supply_degree_.end());
  for (const auto& v : net.demand_nodes_)
    net.max_ns_ = std::max(net.max_ns_, static_cast<int>(v.supplies.size()));
  return net;
}

std::optional<int> Network::demand_index(std::string_view id) const {
  auto it = demand_by_id_.find(std::string(id));
  if (it == demand_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Network::supply_index(std::string_view id) const {
  auto it = supply_by_id_.find(std::string(id));
  if (it == supply_by_id_.end()) return std::nullopt;
  return it->second;
}

bool Network::has_edge(int a, int b) const {
  const auto& adj = adjacency_[a];
  return std::find(adj.begin(), adj.end(), b) != adj.end();
}

int Network::source() const {
  if (!terminals_) throw Error("network has no terminals");
  return terminals_->first;
}

int Network::target() const {
  if (!terminals_) throw Error("network has no terminals");
  return terminals_->second;
}

std::vector<Violation> check_path(const Network& net, const Path& path) {
  std::vector<Violation> out;
  if (path.nodes.empty()) {
    out.push_back({"", "empty path"});
    return out;
  }
  for (int v : path.nodes)
    if (v < 0 || v >= net.demand_count()) {
      out.push_back({std::to_string(v), "path node index out of range"});
      return out;
    }
  std::set<int> seen;
  for (int v : path.nodes)
    if (!seen.insert(v).second)
      out.push_back({net.demand(v).id, "path revisits node"});
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i)
    if (!net.has_edge(path.nodes[i], path.nodes[i + 1]))
      out.push_back({net.demand(path.nodes[i]).id + "-" + net.demand(path.nodes[i + 1]).id,
                     "consecutive path nodes are not adjacent"});
  return out;
}

bool is_valid_path(const Network& net, const Path& path) {
  return check_path(net, path).empty();
}

std::vector<Violation> check_pair(const Network& net, const PathPair& pair) {
  std::vector<Violation> out = check_path(net, pair.first);
  auto second = check_path(net, pair.second);
  out.insert(out.end(), second.begin(), second.end());
  if (!out.empty()) return out;
  if (pair.first.nodes.front() != pair.second.nodes.front() ||
      pair.first.nodes.back() != pair.second.nodes.back())
    out.push_back({"", "paths do not share endpoints"});
  if (pair.require_node_disjoint) {
    auto a = interior_nodes(net, pair.first);
    auto b = interior_nodes(net, pair.second);
    std::set<int> set_a(a.begin(), a.end());
    for (int v : b)
      if (set_a.count(v))
        out.push_back({net.demand(v).id, "interiors share a node"});
  }
  return out;
}

std::vector<int> interior_nodes(const Network& net, const Path& path) {
  std::vector<int> out;
  if (path.nodes.size() <= 2) return out;
  for (std::size_t i = 1; i + 1 < path.nodes.size(); ++i)
    if (!net.is_terminal(path.nodes[i])) out.push_back(path.nodes[i]);
  return out;
}

bool path_less(const Network& net, const Path& a, const Path& b) {
  auto rank = [&](const Path& p) {
    std::vector<int> r;
    r.reserve(p.nodes.size());
    for (int v : p.nodes) r.push_back(net.id_rank(v));
    return r;
  };
  return rank(a) < rank(b);
}

Path path_from_ids(const Network& net, std::span<const std::string> ids) {
  Path path;
  for (const auto& id : ids) {
    auto v = net.demand_index(id);
    if (!v) throw Error("unknown demand node '" + id + "'");
    path.nodes.push_back(*v);
  }
  return path;
}

std::vector<std::string> path_to_ids(const Network& net, const Path& path) {
  std::vector<std::string> out;
  out.reserve(path.nodes.size());
  for (int v : path.nodes) out.push_back(net.demand(v).id);
  return out;
}

double node_failure_probability(const Network& net, int v) {
  if (v < 0 || v >= net.demand_count()) throw Error("unknown demand node index");
  if (net.is_terminal(v)) return 0.0;
  std::vector<double> ps;
  ps.reserve(net.demand(v).supplies.size());
  for (int u : net.demand(v).supplies) ps.push_back(net.supply(u).p_fail);
  return product(ps);
}

double node_failure_probability(const Network& net, std::string_view id) {
  auto v = net.demand_index(id);
  if (!v) throw Error("unknown demand node '" + std::string(id) + "'");
  return node_failure_probability(net, *v);
}

std::vector<int> reduce_redundant(const Network& net, const Path& path) {
  std::vector<int> interior = interior_nodes(net, path);
  std::vector<bool> dropped(interior.size(), false);
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const auto& si = net.demand(interior[i]).supplies;
    for (std::size_t j = 0; j < interior.size(); ++j) {
      if (j == i || dropped[j]) continue;
      const auto& sj = net.demand(interior[j]).supplies;
      bool strict = sj.size() < si.size() && subset_of(sj, si);
      bool earlier_duplicate = j < i && sj == si;
      if (strict || earlier_duplicate) {
        dropped[i] = true;
        break;
      }
    }
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < interior.size(); ++i)
    if (!dropped[i]) out.push_back(interior[i]);
  return out;
}

}  // namespace idnet
