#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "idnet/model.hpp"

namespace idnet {

struct ExactResult {
  double probability = 0.0;
  int enumerated_supply_count = 0;
  std::uint64_t enumeration_size = 0;  // always 2^enumerated_supply_count
};

struct OracleOptions {
  int max_supplies = 22;            // enumeration cap on |union of supplies|
  std::uint64_t path_budget = 100000;  // cap on simple s-t paths enumerated
  std::uint64_t pair_budget = 100000;  // cap on pair evaluations
  bool parallel = true;
};

/// Probability that at least one interior node of the path fails, by direct
/// enumeration of all supply-failure subsets.
ExactResult exact_path_failure(const Network& net, const Path& path,
                               const OracleOptions& opts = {});

/// Probability that both paths fail (each loses at least one interior node).
ExactResult exact_pair_failure(const Network& net, const PathPair& pair,
                               const OracleOptions& opts = {});

/// All simple s-t paths, in lexicographic order of their id-rank sequences.
std::vector<Path> enumerate_simple_paths(const Network& net, int s, int t,
                                         std::uint64_t budget);

/// Most reliable s-t path by exhaustive search; ties resolved toward the
/// lexicographically smallest node sequence.
std::pair<Path, ExactResult> exact_best_path(const Network& net,
                                             const OracleOptions& opts = {});

/// Most reliable pair of s-t paths over all normalized path pairs.
std::pair<PathPair, ExactResult> exact_best_pair(const Network& net,
                                                 bool require_node_disjoint,
                                                 const OracleOptions& opts = {});

/// Resilience value for pairs whose paths can never both be disconnected.
inline constexpr int kUnboundedResilience = std::numeric_limits<int>::max();

/// Largest d such that removing any d supply nodes leaves at least one path
/// connected; found by scanning failure subsets in increasing cardinality.
int exact_resilience(const Network& net, const PathPair& pair,
                     const OracleOptions& opts = {});

namespace detail {

// A union-of-conjunctions event over a small supply universe. The event
// occurs when some first_masks entry is contained in the failed set and,
// if second_masks is nonempty, some second_masks entry is as well.
struct EnumProblem {
  std::vector<double> p;                  // failure probability per slot
  std::vector<std::uint64_t> first_masks;
  std::vector<std::uint64_t> second_masks;
};

double event_probability_serial(const EnumProblem& problem);
double event_probability_parallel(const EnumProblem& problem);

// Smallest popcount of a failed set triggering the event; -1 if none does.
int min_event_cardinality_serial(const EnumProblem& problem);
int min_event_cardinality_parallel(const EnumProblem& problem);

}  // namespace detail

}  // namespace idnet
