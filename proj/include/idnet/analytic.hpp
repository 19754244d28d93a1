#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "idnet/model.hpp"

namespace idnet {

/// Combinatorial reliability indicators for one path: the minimum interior
/// supply-set size and the number of non-redundant interior nodes attaining
/// it. valid_p_max is the coefficient of epsilon in the sandwich
/// precondition p <= epsilon / m.
struct PathIndicators {
  int n_s_min = 0;
  std::int64_t m_bar = 0;
  double valid_p_max = 0.0;  // 1 / interior length
};

struct PairIndicators {
  int d = 0;
  std::int64_t m_bar = 0;
};

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
  double ratio_cap = 1.0;  // n_d^{n_s}
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

PathIndicators indicators_single(const Network& net, const Path& path);

/// Sandwich interval (1 +- epsilon) m_bar p^{n_s_min} for a uniform supply
/// failure probability p. With uniform_ns set (every interior node has the
/// same supply count), the precondition relaxes to p <= 2 epsilon / m_bar
/// and the upper endpoint tightens to m_bar p^{n_s}.
Interval approx_single(const PathIndicators& ind, double p, double epsilon,
                       int path_length, bool uniform_ns);

/// Per-supply transformed probability 1 - (1 - p)^{1/n_d(u)}, indexed by
/// supply index. Splitting a shared supply this way can only make the path
/// survival more likely, which yields the lower bound below.
std::vector<double> transform_probabilities(const Network& net);
std::map<std::string, double> transform_probabilities_by_id(const Network& net);

/// Failure probability of node v when its supplies fail with the
/// transformed probabilities.
double transformed_node_failure(const Network& net, std::span<const double> p_tilde,
                                int v);

Bounds bounds_single(const Network& net, const Path& path);

PairIndicators indicators_pair(const Network& net, const PathPair& pair);

/// Sandwich interval (1 +- epsilon) m_bar p^{d+1}; requires
/// p <= epsilon / (m1 m2).
Interval approx_pair(const PairIndicators& ind, double p, double epsilon, int m1, int m2);

}  // namespace idnet
