#pragma once

#include <cmath>
#include <span>

namespace idnet {

// Length assigned to a node whose transformed failure probability is
// (numerically) 1; stands in for +infinity while keeping sums finite.
inline constexpr double kInfiniteLength = 1e18;
inline constexpr double kCertainFailure = 1.0 - 1e-15;

// Product of probabilities; log-space past 30 factors.
inline double product(std::span<const double> factors) {
  if (factors.size() <= 30) {
    double p = 1.0;
    for (double f : factors) p *= f;
    return p;
  }
  double log_sum = 0.0;
  for (double f : factors) {
    if (f <= 0.0) return 0.0;
    log_sum += std::log(f);
  }
  return std::exp(log_sum);
}

// Product of survival terms (1 - p_i), in log1p space past 30 factors.
inline double product_one_minus(std::span<const double> probs) {
  if (probs.size() <= 30) {
    double p = 1.0;
    for (double q : probs) p *= 1.0 - q;
    return p;
  }
  double log_sum = 0.0;
  for (double q : probs) {
    if (q >= 1.0) return 0.0;
    log_sum += std::log1p(-q);
  }
  return std::exp(log_sum);
}

// -ln(1 - p), saturating to kInfiniteLength once p is numerically 1.
inline double neg_log_one_minus(double p) {
  if (p >= kCertainFailure) return kInfiniteLength;
  return -std::log1p(-p);
}

}  // namespace idnet
