#include "idnet/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "idnet/errors.hpp"
#include "idnet/prob.hpp"

namespace idnet {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

std::vector<int> union_of(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

PathIndicators indicators_single(const Network& net, const Path& path) {
  auto interior = interior_nodes(net, path);
  if (interior.empty()) throw Error("indicators_single: path has no interior node");
  PathIndicators ind;
  ind.n_s_min = static_cast<int>(net.demand(interior.front()).supplies.size());
  for (int v : interior)
    ind.n_s_min = std::min(ind.n_s_min, static_cast<int>(net.demand(v).supplies.size()));
  for (int v : reduce_redundant(net, path))
    if (static_cast<int>(net.demand(v).supplies.size()) == ind.n_s_min) ++ind.m_bar;
  ind.valid_p_max = 1.0 / static_cast<double>(interior.size());
  return ind;
}

Interval approx_single(const PathIndicators& ind, double p, double epsilon,
                       int path_length, bool uniform_ns) {
  if (uniform_ns) {
    if (!(p <= 2.0 * epsilon / static_cast<double>(ind.m_bar)))
      throw Error("approx_single: p too large for sandwich guarantee (p > 2*eps/m_bar)");
  } else {
    if (path_length < 1) throw Error("approx_single: path length must be >= 1");
    if (!(p <= epsilon / static_cast<double>(path_length)))
      throw Error("approx_single: p too large for sandwich guarantee (p > eps/m)");
  }
  double center = static_cast<double>(ind.m_bar) * std::pow(p, ind.n_s_min);
  Interval out;
  out.lo = clamp01((1.0 - epsilon) * center);
  out.hi = clamp01(uniform_ns ? center : (1.0 + epsilon) * center);
  return out;
}

std::vector<double> transform_probabilities(const Network& net) {
  std::vector<double> p_tilde(net.supply_count(), 0.0);
  for (int u = 0; u < net.supply_count(); ++u) {
    double p = net.supply(u).p_fail;
    int nd = net.demands_served_by(u);
    if (nd <= 1) {
      p_tilde[u] = p;
    } else {
      p_tilde[u] = 1.0 - std::pow(1.0 - p, 1.0 / static_cast<double>(nd));
    }
  }
  return p_tilde;
}

std::map<std::string, double> transform_probabilities_by_id(const Network& net) {
  auto p_tilde = transform_probabilities(net);
  std::map<std::string, double> out;
  for (int u = 0; u < net.supply_count(); ++u) out[net.supply(u).id] = p_tilde[u];
  return out;
}

double transformed_node_failure(const Network& net, std::span<const double> p_tilde,
                                int v) {
  if (net.is_terminal(v)) return 0.0;
  std::vector<double> factors;
  factors.reserve(net.demand(v).supplies.size());
  for (int u : net.demand(v).supplies) factors.push_back(p_tilde[u]);
  return product(factors);
}

Bounds bounds_single(const Network& net, const Path& path) {
  auto interior = interior_nodes(net, path);
  auto p_tilde = transform_probabilities(net);
  std::vector<double> node_p, node_p_tilde;
  node_p.reserve(interior.size());
  node_p_tilde.reserve(interior.size());
  for (int v : interior) {
    node_p.push_back(node_failure_probability(net, v));
    node_p_tilde.push_back(transformed_node_failure(net, p_tilde, v));
  }
  Bounds bounds;
  bounds.upper = 1.0 - product_one_minus(node_p);
  bounds.lower = 1.0 - product_one_minus(node_p_tilde);
  bounds.ratio_cap = std::pow(static_cast<double>(std::max(1, net.max_demands_per_supply())),
                              static_cast<double>(net.max_supplies_per_demand()));
  return bounds;
}

PairIndicators indicators_pair(const Network& net, const PathPair& pair) {
  auto first = interior_nodes(net, pair.first);
  auto second = interior_nodes(net, pair.second);
  if (first.empty() || second.empty())
    throw Error("indicators_pair: a path has no interior node");

  std::set<std::vector<int>> unions;
  std::size_t min_size = SIZE_MAX;
  for (int v : first) {
    for (int w : second) {
      auto u = union_of(net.demand(v).supplies, net.demand(w).supplies);
      min_size = std::min(min_size, u.size());
      unions.insert(std::move(u));
    }
  }
  PairIndicators ind;
  ind.d = static_cast<int>(min_size) - 1;
  for (const auto& u : unions)
    if (u.size() == min_size) ++ind.m_bar;
  return ind;
}

Interval approx_pair(const PairIndicators& ind, double p, double epsilon, int m1, int m2) {
  if (m1 < 1 || m2 < 1) throw Error("approx_pair: path lengths must be >= 1");
  if (!(p <= epsilon / (static_cast<double>(m1) * static_cast<double>(m2))))
    throw Error("approx_pair: p too large for sandwich guarantee (p > eps/(m1*m2))");
  double center = static_cast<double>(ind.m_bar) * std::pow(p, ind.d + 1);
  return {clamp01((1.0 - epsilon) * center), clamp01((1.0 + epsilon) * center)};
}

}  // namespace idnet
