#include "idnet/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "idnet/analytic.hpp"
#include "idnet/errors.hpp"
#include "idnet/prob.hpp"

namespace idnet {

namespace {

constexpr double kUnreached = std::numeric_limits<double>::infinity();

}  // namespace

LengthedGraph LengthedGraph::from_network(const Network& net,
                                          std::span<const double> node_lengths) {
  LengthedGraph g;
  const int n = net.demand_count();
  g.out.resize(2 * n);
  g.node_arc.resize(n);
  g.demand_rank.resize(2 * n);
  for (int v = 0; v < n; ++v) {
    g.demand_rank[in_node(v)] = net.id_rank(v);
    g.demand_rank[out_node(v)] = net.id_rank(v);
    g.node_arc[v] = static_cast<int>(g.arcs.size());
    g.arcs.push_back({in_node(v), out_node(v), node_lengths[v]});
    g.out[in_node(v)].push_back(g.node_arc[v]);
  }
  for (const auto& [a, b] : net.edges()) {
    g.out[out_node(a)].push_back(static_cast<int>(g.arcs.size()));
    g.arcs.push_back({out_node(a), in_node(b), 0.0});
    g.out[out_node(b)].push_back(static_cast<int>(g.arcs.size()));
    g.arcs.push_back({out_node(b), in_node(a), 0.0});
  }
  for (auto& list : g.out)
    std::sort(list.begin(), list.end(), [&](int x, int y) {
      return g.demand_rank[g.arcs[x].to] < g.demand_rank[g.arcs[y].to];
    });
  return g;
}

std::vector<double> node_lengths(const Network& net) {
  auto p_tilde = transform_probabilities(net);
  std::vector<double> lengths(net.demand_count(), 0.0);
  for (int v = 0; v < net.demand_count(); ++v) {
    if (net.is_terminal(v)) continue;
    lengths[v] = neg_log_one_minus(transformed_node_failure(net, p_tilde, v));
  }
  return lengths;
}

namespace detail {

SearchLabels shortest_paths(const LengthedGraph& graph, int source) {
  const int n = graph.split_count();
  SearchLabels labels;
  labels.dist.assign(n, kUnreached);
  labels.hops.assign(n, 0);
  labels.parent_arc.assign(n, -1);
  labels.seq.assign(n, {});
  labels.dist[source] = 0.0;
  labels.seq[source] = {graph.demand_rank[source]};

  // Relax to fixpoint. Every update strictly decreases a label in the total
  // order (dist, hops, id sequence), so absent negative cycles this settles
  // within a few node-count rounds.
  const int max_rounds = 3 * n + 8;
  int round = 0;
  bool changed = true;
  while (changed) {
    if (++round > max_rounds)
      throw Error("shortest-path relaxation did not converge: negative cycle");
    changed = false;
    for (int x = 0; x < n; ++x) {
      if (labels.dist[x] == kUnreached) continue;
      for (int a : graph.out[x]) {
        const auto& arc = graph.arcs[a];
        const int w = arc.to;
        const double nd = labels.dist[x] + arc.length;
        const int nh = labels.hops[x] + 1;
        bool better;
        if (nd != labels.dist[w]) {
          better = nd < labels.dist[w];
        } else if (nh != labels.hops[w]) {
          better = nh < labels.hops[w];
        } else {
          // Candidate sequence is seq[x] ++ [rank(w)]; the stored sequence
          // ends in rank(w) as well, so compare the first nh entries.
          const auto& cand = labels.seq[x];
          const auto& cur = labels.seq[w];
          better = false;
          for (std::size_t i = 0; i < cand.size() && i < cur.size(); ++i) {
            if (cand[i] != cur[i]) {
              better = cand[i] < cur[i];
              break;
            }
          }
        }
        if (better) {
          labels.dist[w] = nd;
          labels.hops[w] = nh;
          labels.parent_arc[w] = a;
          labels.seq[w] = labels.seq[x];
          labels.seq[w].push_back(graph.demand_rank[w]);
          changed = true;
        }
      }
    }
  }
  return labels;
}

std::vector<int> extract_split_path(const LengthedGraph& graph,
                                    const SearchLabels& labels, int target) {
  if (labels.dist[target] == kUnreached) return {};
  std::vector<int> nodes;
  int x = target;
  while (true) {
    nodes.push_back(x);
    int a = labels.parent_arc[x];
    if (a < 0) break;
    x = graph.arcs[a].from;
  }
  std::reverse(nodes.begin(), nodes.end());
  return nodes;
}

}  // namespace detail

namespace {

// Split-node walk -> demand-node path (consecutive duplicates collapse).
Path demand_path(const std::vector<int>& split_nodes) {
  Path path;
  for (int x : split_nodes) {
    int v = LengthedGraph::demand_of(x);
    if (path.nodes.empty() || path.nodes.back() != v) path.nodes.push_back(v);
  }
  return path;
}

double interior_length_sum(const Network& net, std::span<const double> lengths,
                           const Path& path) {
  double sum = 0.0;
  for (int v : interior_nodes(net, path)) sum += lengths[v];
  return sum;
}

// Lexicographically smallest shortest path from s to t within the node set
// marked allowed. Returns an empty path when t is unreachable.
Path lex_smallest_shortest_path(const Network& net, const std::vector<bool>& allowed,
                                int s, int t) {
  const int n = net.demand_count();
  const int unset = -1;
  std::vector<int> dist_s(n, unset), dist_t(n, unset);
  auto bfs = [&](int start, std::vector<int>& dist) {
    std::queue<int> queue;
    dist[start] = 0;
    queue.push(start);
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop();
      for (int w : net.neighbors(x)) {
        if (!allowed[w] || dist[w] != unset) continue;
        dist[w] = dist[x] + 1;
        queue.push(w);
      }
    }
  };
  bfs(s, dist_s);
  if (dist_s[t] == unset) return {};
  bfs(t, dist_t);

  Path path;
  path.nodes.push_back(s);
  int x = s;
  while (x != t) {
    int best = -1;
    for (int w : net.neighbors(x)) {
      if (!allowed[w]) continue;
      if (dist_s[w] != dist_s[x] + 1 || dist_t[w] == unset ||
          dist_t[w] != dist_t[x] - 1)
        continue;
      if (best < 0 || net.id_rank(w) < net.id_rank(best)) best = w;
    }
    x = best;
    path.nodes.push_back(x);
  }
  return path;
}

}  // namespace

MaxCapacityResult max_capacity_path(const Network& net) {
  const int s = net.source();
  const int t = net.target();
  const int n = net.demand_count();

  std::vector<bool> all(n, true);
  if (lex_smallest_shortest_path(net, all, s, t).nodes.empty())
    throw InfeasibleError("terminals are disconnected");

  if (net.has_edge(s, t)) {
    // A direct edge has no interior node; by convention its capacity beats
    // every finite bottleneck.
    return {Path{{s, t}}, std::nullopt};
  }

  std::set<int, std::greater<int>> capacities;
  for (int v = 0; v < n; ++v)
    if (!net.is_terminal(v))
      capacities.insert(static_cast<int>(net.demand(v).supplies.size()));

  for (int k : capacities) {
    std::vector<bool> allowed(n, false);
    for (int v = 0; v < n; ++v)
      allowed[v] = net.is_terminal(v) ||
                   static_cast<int>(net.demand(v).supplies.size()) >= k;
    Path path = lex_smallest_shortest_path(net, allowed, s, t);
    if (!path.nodes.empty()) return {std::move(path), k};
  }
  throw InfeasibleError("terminals are disconnected");
}

ReliablePathResult approx_reliable_path(const Network& net) {
  const int s = net.source();
  const int t = net.target();
  auto lengths = node_lengths(net);
  auto graph = LengthedGraph::from_network(net, lengths);
  auto labels = detail::shortest_paths(graph, LengthedGraph::out_node(s));
  auto split = detail::extract_split_path(graph, labels, LengthedGraph::in_node(t));
  if (split.empty()) throw InfeasibleError("terminals are disconnected");
  ReliablePathResult result;
  result.path = demand_path(split);
  result.surrogate_length = interior_length_sum(net, lengths, result.path);
  result.certain_failure = result.surrogate_length >= kInfiniteLength;
  return result;
}

ReliablePairResult reliable_pair_heuristic(const Network& net) {
  const int s = net.source();
  const int t = net.target();
  auto lengths = node_lengths(net);
  auto graph = LengthedGraph::from_network(net, lengths);
  const int src = LengthedGraph::out_node(s);
  const int dst = LengthedGraph::in_node(t);

  auto labels1 = detail::shortest_paths(graph, src);
  auto split1 = detail::extract_split_path(graph, labels1, dst);
  if (split1.empty()) throw InfeasibleError("terminals are disconnected");

  std::set<std::pair<int, int>> first_arcs;
  for (std::size_t i = 0; i + 1 < split1.size(); ++i)
    first_arcs.insert({split1[i], split1[i + 1]});

  // Residual graph: drop the first path's arcs, add reversed negated arcs.
  LengthedGraph residual;
  residual.out.resize(graph.split_count());
  residual.demand_rank = graph.demand_rank;
  for (const auto& arc : graph.arcs) {
    if (first_arcs.count({arc.from, arc.to})) {
      residual.out[arc.to].push_back(static_cast<int>(residual.arcs.size()));
      residual.arcs.push_back({arc.to, arc.from, -arc.length});
    } else {
      residual.out[arc.from].push_back(static_cast<int>(residual.arcs.size()));
      residual.arcs.push_back({arc.from, arc.to, arc.length});
    }
  }
  for (auto& list : residual.out)
    std::sort(list.begin(), list.end(), [&](int x, int y) {
      return residual.demand_rank[residual.arcs[x].to] <
             residual.demand_rank[residual.arcs[y].to];
    });

  auto labels2 = detail::shortest_paths(residual, src);
  auto split2 = detail::extract_split_path(residual, labels2, dst);
  if (split2.empty()) throw InfeasibleError("no node-disjoint pair of s-t paths exists");

  // Cycle cancellation: arcs traversed in opposite directions drop out.
  std::set<std::pair<int, int>> arc_set = first_arcs;
  for (std::size_t i = 0; i + 1 < split2.size(); ++i) {
    int from = split2[i], to = split2[i + 1];
    auto reversed = arc_set.find({to, from});
    if (reversed != arc_set.end())
      arc_set.erase(reversed);
    else
      arc_set.insert({from, to});
  }

  // The remaining arcs form two arc-disjoint src->dst paths; walk them,
  // taking the smaller-rank head first for determinism.
  std::map<int, std::vector<int>> next;
  for (const auto& [from, to] : arc_set) next[from].push_back(to);
  for (auto& [from, tos] : next)
    std::sort(tos.begin(), tos.end(), [&](int x, int y) {
      return graph.demand_rank[x] < graph.demand_rank[y];
    });
  auto walk = [&]() {
    std::vector<int> nodes{src};
    int x = src;
    while (x != dst) {
      auto it = next.find(x);
      if (it == next.end() || it->second.empty())
        throw Error("pair decomposition failed: dangling arc chain");
      x = it->second.front();
      it->second.erase(it->second.begin());
      nodes.push_back(x);
    }
    return nodes;
  };
  Path a = demand_path(walk());
  Path b = demand_path(walk());

  ReliablePairResult result;
  if (path_less(net, b, a)) std::swap(a, b);
  result.pair = PathPair{std::move(a), std::move(b), true};
  auto violations = check_pair(net, result.pair);
  if (!violations.empty())
    throw Error("pair decomposition failed: [" + violations.front().element + "] " +
                violations.front().message);
  result.total_surrogate_length =
      interior_length_sum(net, lengths, result.pair.first) +
      interior_length_sum(net, lengths, result.pair.second);
  return result;
}

}  // namespace idnet
