#include "idnet/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "idnet/errors.hpp"
#include "idnet/prob.hpp"

namespace idnet {

namespace detail {

namespace {

// Maps the supplies touched by the given interiors onto dense slots.
struct SlotMap {
  std::vector<int> supplies;
  std::unordered_map<int, int> slot_of;
};

SlotMap slot_map(const Network& net, const std::vector<int>& a, const std::vector<int>& b) {
  SlotMap map;
  for (const auto* interior : {&a, &b})
    for (int v : *interior)
      for (int u : net.demand(v).supplies) map.supplies.push_back(u);
  std::sort(map.supplies.begin(), map.supplies.end());
  map.supplies.erase(std::unique(map.supplies.begin(), map.supplies.end()),
                     map.supplies.end());
  for (std::size_t i = 0; i < map.supplies.size(); ++i)
    map.slot_of[map.supplies[i]] = static_cast<int>(i);
  return map;
}

Clause make_clause(const std::vector<double>& p, std::vector<int> slots) {
  Clause c;
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  c.slots = std::move(slots);
  std::vector<double> factors;
  factors.reserve(c.slots.size());
  for (int s : c.slots) factors.push_back(p[s]);
  c.weight = product(factors);
  return c;
}

void finalize(DnfInstance& instance) {
  instance.weight_sum = 0.0;
  for (const auto& c : instance.clauses) instance.weight_sum += c.weight;
  double cum = 0.0;
  for (std::size_t k = 0; k < instance.clauses.size(); ++k) {
    if (instance.clauses[k].weight <= 0.0) continue;  // can never be the forced clause
    cum += instance.clauses[k].weight;
    instance.selectable.push_back(static_cast<int>(k));
    instance.cumulative.push_back(cum);
  }
}

}  // namespace

DnfInstance path_instance(const Network& net, const Path& path) {
  auto interior = interior_nodes(net, path);
  auto map = slot_map(net, interior, {});
  DnfInstance instance;
  for (int u : map.supplies) instance.p.push_back(net.supply(u).p_fail);
  for (int v : interior) {
    std::vector<int> slots;
    for (int u : net.demand(v).supplies) slots.push_back(map.slot_of.at(u));
    instance.clauses.push_back(make_clause(instance.p, std::move(slots)));
  }
  finalize(instance);
  return instance;
}

DnfInstance pair_instance(const Network& net, const PathPair& pair) {
  auto first = interior_nodes(net, pair.first);
  auto second = interior_nodes(net, pair.second);
  auto map = slot_map(net, first, second);
  DnfInstance instance;
  for (int u : map.supplies) instance.p.push_back(net.supply(u).p_fail);
  for (int v : first) {
    for (int w : second) {
      std::vector<int> slots;
      for (int u : net.demand(v).supplies) slots.push_back(map.slot_of.at(u));
      for (int u : net.demand(w).supplies) slots.push_back(map.slot_of.at(u));
      instance.clauses.push_back(make_clause(instance.p, std::move(slots)));
    }
  }
  finalize(instance);
  return instance;
}

Trial run_trial(const DnfInstance& instance, SplitMix64& rng,
                std::vector<std::uint8_t>& failed) {
  Trial trial;

  // Step 2: choose a clause with probability proportional to its weight.
  double target = rng.uniform01() * instance.cumulative.back();
  std::size_t pick =
      std::upper_bound(instance.cumulative.begin(), instance.cumulative.end(), target) -
      instance.cumulative.begin();
  if (pick == instance.cumulative.size()) --pick;
  trial.chosen = instance.selectable[pick];

  // Step 3: force the chosen clause's supplies failed, sample the rest.
  failed.assign(instance.p.size(), 0);
  for (int s : instance.clauses[trial.chosen].slots) failed[s] = 2;  // forced
  for (std::size_t s = 0; s < instance.p.size(); ++s) {
    if (failed[s] == 2) continue;
    failed[s] = rng.uniform01() < instance.p[s] ? 1 : 0;
  }

  // Step 4: the chosen clause scores iff it is the first failed clause.
  for (std::size_t k = 0; k < instance.clauses.size(); ++k) {
    bool all = true;
    for (int s : instance.clauses[k].slots)
      if (!failed[s]) {
        all = false;
        break;
      }
    if (all) {
      trial.first_failed = static_cast<int>(k);
      break;
    }
  }
  trial.hit = trial.first_failed == trial.chosen;
  return trial;
}

std::uint64_t count_hits_serial(const DnfInstance& instance, std::uint64_t trials,
                                std::uint64_t seed) {
  std::uint64_t hits = 0;
  std::vector<std::uint8_t> failed;
  for (std::uint64_t t = 0; t < trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(seed, t);
    hits += run_trial(instance, rng, failed).hit ? 1 : 0;
  }
  return hits;
}

std::uint64_t count_hits_parallel(const DnfInstance& instance, std::uint64_t trials,
                                  std::uint64_t seed) {
  std::uint64_t hits = 0;
#pragma omp parallel reduction(+ : hits)
  {
    std::vector<std::uint8_t> failed;
#pragma omp for schedule(static)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
      SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(t));
      hits += run_trial(instance, rng, failed).hit ? 1 : 0;
    }
  }
  return hits;
}

namespace {

bool any_clause_failed(const DnfInstance& instance, const std::vector<std::uint8_t>& failed) {
  for (const auto& clause : instance.clauses) {
    bool all = true;
    for (int s : clause.slots)
      if (!failed[s]) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

std::uint64_t event_trial(const DnfInstance& instance, std::uint64_t t, std::uint64_t seed,
                          std::vector<std::uint8_t>& failed) {
  SplitMix64 rng = SplitMix64::stream(seed, t);
  failed.resize(instance.p.size());
  for (std::size_t s = 0; s < instance.p.size(); ++s)
    failed[s] = rng.uniform01() < instance.p[s] ? 1 : 0;
  return any_clause_failed(instance, failed) ? 1 : 0;
}

}  // namespace

std::uint64_t count_event_trials_serial(const DnfInstance& instance, std::uint64_t trials,
                                        std::uint64_t seed) {
  std::uint64_t count = 0;
  std::vector<std::uint8_t> failed;
  for (std::uint64_t t = 0; t < trials; ++t) count += event_trial(instance, t, seed, failed);
  return count;
}

std::uint64_t count_event_trials_parallel(const DnfInstance& instance,
                                          std::uint64_t trials, std::uint64_t seed) {
  std::uint64_t count = 0;
#pragma omp parallel reduction(+ : count)
  {
    std::vector<std::uint8_t> failed;
#pragma omp for schedule(static)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t)
      count += event_trial(instance, static_cast<std::uint64_t>(t), seed, failed);
  }
  return count;
}

}  // namespace detail

std::uint64_t iteration_count(std::uint64_t clause_count, double epsilon, double delta) {
  if (clause_count < 1) throw Error("iteration_count: clause count must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("iteration_count: epsilon not in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw Error("iteration_count: delta not in (0, 1)");
  double a = 3.0 * static_cast<double>(clause_count) * std::log(2.0 / delta) /
             (epsilon * epsilon);
  if (!(a < 9e18)) throw Error("iteration_count: trial count overflows");
  return static_cast<std::uint64_t>(std::ceil(a));
}

namespace {

Estimate run_importance_sampler(const detail::DnfInstance& instance, double epsilon,
                                double delta, std::uint64_t seed,
                                const SamplerOptions& opts) {
  Estimate est;
  est.epsilon = epsilon;
  est.delta = delta;
  est.seed = seed;
  est.weight_sum = instance.weight_sum;
  if (instance.clauses.empty() || instance.selectable.empty()) {
    // Zero normalizer: the failure event has probability exactly 0.
    return est;
  }
  est.trials_a = iteration_count(instance.clauses.size(), epsilon, delta);
  est.successes_b = opts.parallel
                        ? detail::count_hits_parallel(instance, est.trials_a, seed)
                        : detail::count_hits_serial(instance, est.trials_a, seed);
  est.value = static_cast<double>(est.successes_b) / static_cast<double>(est.trials_a) *
              est.weight_sum;
  return est;
}

void require_valid(const Network& net, const Path& path) {
  auto violations = check_path(net, path);
  if (!violations.empty())
    throw Error("invalid path: [" + violations.front().element + "] " +
                violations.front().message);
}

void require_valid(const Network& net, const PathPair& pair) {
  auto violations = check_pair(net, pair);
  if (!violations.empty())
    throw Error("invalid path pair: [" + violations.front().element + "] " +
                violations.front().message);
}

}  // namespace

Estimate estimate_path_failure(const Network& net, const Path& path, double epsilon,
                               double delta, std::uint64_t seed,
                               const SamplerOptions& opts) {
  require_valid(net, path);
  return run_importance_sampler(detail::path_instance(net, path), epsilon, delta, seed,
                                opts);
}

Estimate estimate_pair_failure(const Network& net, const PathPair& pair, double epsilon,
                               double delta, std::uint64_t seed,
                               const SamplerOptions& opts) {
  require_valid(net, pair);
  return run_importance_sampler(detail::pair_instance(net, pair), epsilon, delta, seed,
                                opts);
}

namespace {

Estimate run_naive(const detail::DnfInstance& instance, std::uint64_t trials,
                   std::uint64_t seed, const SamplerOptions& opts) {
  if (trials < 1) throw Error("naive_monte_carlo: trials must be >= 1");
  Estimate est;
  est.seed = seed;
  est.trials_a = trials;
  est.weight_sum = 1.0;
  est.successes_b = opts.parallel
                        ? detail::count_event_trials_parallel(instance, trials, seed)
                        : detail::count_event_trials_serial(instance, trials, seed);
  est.value = static_cast<double>(est.successes_b) / static_cast<double>(trials);
  return est;
}

}  // namespace

Estimate naive_monte_carlo(const Network& net, const Path& path, std::uint64_t trials,
                           std::uint64_t seed, const SamplerOptions& opts) {
  require_valid(net, path);
  return run_naive(detail::path_instance(net, path), trials, seed, opts);
}

Estimate naive_monte_carlo(const Network& net, const PathPair& pair, std::uint64_t trials,
                           std::uint64_t seed, const SamplerOptions& opts) {
  require_valid(net, pair);
  return run_naive(detail::pair_instance(net, pair), trials, seed, opts);
}

}  // namespace idnet
