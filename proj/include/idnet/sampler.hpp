#pragma once

#include <cstdint>
#include <vector>

#include "idnet/model.hpp"
#include "idnet/rng.hpp"

namespace idnet {

/// Result of a randomized probability estimate. value always equals
/// (successes_b / trials_a) * weight_sum, and trials_a is the iteration
/// count required for the (epsilon, delta) contract.
struct Estimate {
  double value = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t trials_a = 0;
  std::uint64_t successes_b = 0;
  double weight_sum = 0.0;
  std::uint64_t seed = 0;
};

struct SamplerOptions {
  bool parallel = true;
};

/// ceil(3 m ln(2/delta) / epsilon^2): trials needed so the importance
/// sampler meets the (epsilon, delta) contract on an m-clause instance.
std::uint64_t iteration_count(std::uint64_t clause_count, double epsilon, double delta);

/// Importance-sampling estimate of the path failure probability. One trial
/// forces a weight-proportionally chosen interior node's supplies to fail,
/// samples the rest, and scores a hit when the chosen node is the first
/// failed node in path order.
Estimate estimate_path_failure(const Network& net, const Path& path, double epsilon,
                               double delta, std::uint64_t seed,
                               const SamplerOptions& opts = {});

/// Same scheme over the m1*m2 node-pair clauses of a path pair.
Estimate estimate_pair_failure(const Network& net, const PathPair& pair, double epsilon,
                               double delta, std::uint64_t seed,
                               const SamplerOptions& opts = {});

/// Baseline: samples every supply per trial and counts failing trials.
Estimate naive_monte_carlo(const Network& net, const Path& path, std::uint64_t trials,
                           std::uint64_t seed, const SamplerOptions& opts = {});
Estimate naive_monte_carlo(const Network& net, const PathPair& pair, std::uint64_t trials,
                           std::uint64_t seed, const SamplerOptions& opts = {});

namespace detail {

struct Clause {
  std::vector<int> slots;  // sorted slot indices
  double weight = 0.0;     // product of slot failure probabilities
};

// A DNF instance over a dense slot universe: the event is the disjunction
// of the clauses' all-slots-failed conjunctions.
struct DnfInstance {
  std::vector<double> p;        // failure probability per slot
  std::vector<Clause> clauses;  // fixed order defines "first failed"
  double weight_sum = 0.0;
  std::vector<int> selectable;       // clauses with positive weight
  std::vector<double> cumulative;    // cumulative weights over selectable
};

DnfInstance path_instance(const Network& net, const Path& path);
DnfInstance pair_instance(const Network& net, const PathPair& pair);

struct Trial {
  int chosen = -1;        // selected clause
  int first_failed = -1;  // first clause fully failed under the sample
  bool hit = false;       // chosen == first_failed
};

Trial run_trial(const DnfInstance& instance, SplitMix64& rng,
                std::vector<std::uint8_t>& failed_scratch);

std::uint64_t count_hits_serial(const DnfInstance& instance, std::uint64_t trials,
                                std::uint64_t seed);
std::uint64_t count_hits_parallel(const DnfInstance& instance, std::uint64_t trials,
                                  std::uint64_t seed);

// Naive kernel: counts trials in which any clause is fully failed.
std::uint64_t count_event_trials_serial(const DnfInstance& instance, std::uint64_t trials,
                                        std::uint64_t seed);
std::uint64_t count_event_trials_parallel(const DnfInstance& instance,
                                          std::uint64_t trials, std::uint64_t seed);

}  // namespace detail

}  // namespace idnet
