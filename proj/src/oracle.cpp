#include "idnet/oracle.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "idnet/errors.hpp"

namespace idnet {

namespace detail {

namespace {

inline bool event_occurs(const EnumProblem& problem, std::uint64_t failed) {
  bool first = false;
  for (std::uint64_t m : problem.first_masks)
    if ((m & ~failed) == 0) {
      first = true;
      break;
    }
  if (!first) return false;
  if (problem.second_masks.empty()) return true;
  for (std::uint64_t m : problem.second_masks)
    if ((m & ~failed) == 0) return true;
  return false;
}

inline double subset_probability(const EnumProblem& problem, std::uint64_t failed) {
  double prob = 1.0;
  for (std::size_t u = 0; u < problem.p.size(); ++u)
    prob *= (failed >> u) & 1 ? problem.p[u] : 1.0 - problem.p[u];
  return prob;
}

double event_probability_range(const EnumProblem& problem, std::uint64_t lo,
                               std::uint64_t hi) {
  double sum = 0.0;
  for (std::uint64_t failed = lo; failed < hi; ++failed)
    if (event_occurs(problem, failed)) sum += subset_probability(problem, failed);
  return sum;
}

int min_event_cardinality_range(const EnumProblem& problem, std::uint64_t lo,
                                std::uint64_t hi) {
  int best = -1;
  for (std::uint64_t failed = lo; failed < hi; ++failed) {
    int card = std::popcount(failed);
    if (best >= 0 && card >= best) continue;
    if (event_occurs(problem, failed)) best = card;
  }
  return best;
}

// Fixed chunk partition of the subset space. The parallel kernels reduce
// per-chunk results in index order, so the outcome does not depend on the
// number of worker threads.
struct Chunks {
  std::uint64_t count;
  std::uint64_t width;
};

Chunks chunk_layout(std::size_t slots) {
  std::uint64_t total = std::uint64_t{1} << slots;
  if (slots <= 10) return {1, total};
  std::uint64_t count = std::uint64_t{1} << 8;
  return {count, total / count};
}

}  // namespace

double event_probability_serial(const EnumProblem& problem) {
  return event_probability_range(problem, 0, std::uint64_t{1} << problem.p.size());
}

double event_probability_parallel(const EnumProblem& problem) {
  auto [count, width] = chunk_layout(problem.p.size());
  std::vector<double> partial(count, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(count); ++c)
    partial[c] = event_probability_range(problem, c * width, (c + 1) * width);
  double sum = 0.0;
  for (double s : partial) sum += s;
  return sum;
}

int min_event_cardinality_serial(const EnumProblem& problem) {
  return min_event_cardinality_range(problem, 0, std::uint64_t{1} << problem.p.size());
}

int min_event_cardinality_parallel(const EnumProblem& problem) {
  auto [count, width] = chunk_layout(problem.p.size());
  std::vector<int> partial(count, -1);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(count); ++c)
    partial[c] = min_event_cardinality_range(problem, c * width, (c + 1) * width);
  int best = -1;
  for (int b : partial)
    if (b >= 0 && (best < 0 || b < best)) best = b;
  return best;
}

}  // namespace detail

namespace {

// Maps the interiors' supply nodes onto a dense slot universe and each
// interior node onto its slot bitmask.
struct SlotUniverse {
  std::vector<int> supplies;  // slot -> supply index
  detail::EnumProblem problem;
};

std::vector<std::uint64_t> node_masks(const Network& net, const std::vector<int>& interior,
                                      const std::unordered_map<int, int>& slot_of) {
  std::vector<std::uint64_t> masks;
  masks.reserve(interior.size());
  for (int v : interior) {
    std::uint64_t mask = 0;
    for (int u : net.demand(v).supplies) mask |= std::uint64_t{1} << slot_of.at(u);
    masks.push_back(mask);
  }
  return masks;
}

SlotUniverse build_universe(const Network& net, const std::vector<int>& interior_first,
                            const std::vector<int>& interior_second, int max_supplies) {
  SlotUniverse uni;
  std::vector<int> all;
  for (const auto* interior : {&interior_first, &interior_second})
    for (int v : *interior)
      for (int u : net.demand(v).supplies) all.push_back(u);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (static_cast<int>(all.size()) > max_supplies)
    throw BudgetExceededError("instance too large for oracle: " +
                              std::to_string(all.size()) + " supplies exceed cap " +
                              std::to_string(max_supplies));
  uni.supplies = all;
  std::unordered_map<int, int> slot_of;
  for (std::size_t i = 0; i < all.size(); ++i) slot_of[all[i]] = static_cast<int>(i);
  uni.problem.p.reserve(all.size());
  for (int u : all) uni.problem.p.push_back(net.supply(u).p_fail);
  uni.problem.first_masks = node_masks(net, interior_first, slot_of);
  uni.problem.second_masks = node_masks(net, interior_second, slot_of);
  return uni;
}

ExactResult run_event_probability(const detail::EnumProblem& problem, bool parallel) {
  ExactResult result;
  result.enumerated_supply_count = static_cast<int>(problem.p.size());
  result.enumeration_size = std::uint64_t{1} << problem.p.size();
  result.probability = parallel ? detail::event_probability_parallel(problem)
                                : detail::event_probability_serial(problem);
  return result;
}

void require_valid_path(const Network& net, const Path& path) {
  auto violations = check_path(net, path);
  if (!violations.empty())
    throw Error("invalid path: [" + violations.front().element + "] " +
                violations.front().message);
}

void require_valid_pair(const Network& net, const PathPair& pair) {
  auto violations = check_pair(net, pair);
  if (!violations.empty())
    throw Error("invalid path pair: [" + violations.front().element + "] " +
                violations.front().message);
}

bool interiors_disjoint(const Network& net, const Path& a, const Path& b) {
  auto ia = interior_nodes(net, a);
  auto ib = interior_nodes(net, b);
  for (int v : ia)
    for (int w : ib)
      if (v == w) return false;
  return true;
}

}  // namespace

ExactResult exact_path_failure(const Network& net, const Path& path,
                               const OracleOptions& opts) {
  require_valid_path(net, path);
  auto interior = interior_nodes(net, path);
  auto uni = build_universe(net, interior, {}, opts.max_supplies);
  return run_event_probability(uni.problem, opts.parallel);
}

ExactResult exact_pair_failure(const Network& net, const PathPair& pair,
                               const OracleOptions& opts) {
  require_valid_pair(net, pair);
  auto first = interior_nodes(net, pair.first);
  auto second = interior_nodes(net, pair.second);
  auto uni = build_universe(net, first, second, opts.max_supplies);
  if (uni.problem.second_masks.empty()) {
    // One path has no failable node, so both paths can never fail together.
    ExactResult result;
    result.enumerated_supply_count = static_cast<int>(uni.problem.p.size());
    result.enumeration_size = std::uint64_t{1} << uni.problem.p.size();
    result.probability = 0.0;
    return result;
  }
  return run_event_probability(uni.problem, opts.parallel);
}

std::vector<Path> enumerate_simple_paths(const Network& net, int s, int t,
                                         std::uint64_t budget) {
  std::vector<Path> paths;
  std::vector<int> stack{s};
  std::vector<bool> on_stack(net.demand_count(), false);
  on_stack[s] = true;

  // Iterative DFS over neighbors in id-rank order; emits paths sorted by
  // their rank sequences.
  std::vector<std::size_t> next_index{0};
  while (!stack.empty()) {
    int v = stack.back();
    if (v == t) {
      if (paths.size() == budget)
        throw BudgetExceededError("simple path enumeration exceeded budget of " +
                                  std::to_string(budget) + " paths");
      paths.push_back(Path{stack});
      on_stack[v] = false;
      stack.pop_back();
      next_index.pop_back();
      continue;
    }
    auto neigh = net.neighbors(v);
    std::size_t i = next_index.back();
    bool advanced = false;
    for (; i < neigh.size(); ++i) {
      int w = neigh[i];
      if (on_stack[w]) continue;
      next_index.back() = i + 1;
      stack.push_back(w);
      on_stack[w] = true;
      next_index.push_back(0);
      advanced = true;
      break;
    }
    if (!advanced) {
      on_stack[v] = false;
      stack.pop_back();
      next_index.pop_back();
    }
  }
  return paths;
}

std::pair<Path, ExactResult> exact_best_path(const Network& net,
                                             const OracleOptions& opts) {
  auto paths = enumerate_simple_paths(net, net.source(), net.target(), opts.path_budget);
  if (paths.empty()) throw InfeasibleError("no s-t path exists");
  const Path* best = nullptr;
  ExactResult best_result;
  for (const auto& path : paths) {
    ExactResult r = exact_path_failure(net, path, opts);
    if (!best || r.probability < best_result.probability) {
      best = &path;
      best_result = r;
    }
  }
  return {*best, best_result};
}

std::pair<PathPair, ExactResult> exact_best_pair(const Network& net,
                                                 bool require_node_disjoint,
                                                 const OracleOptions& opts) {
  auto paths = enumerate_simple_paths(net, net.source(), net.target(), opts.path_budget);
  if (paths.empty()) throw InfeasibleError("no s-t path exists");
  bool found = false;
  PathPair best_pair;
  ExactResult best_result;
  std::uint64_t evaluated = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = i; j < paths.size(); ++j) {
      if (require_node_disjoint && !interiors_disjoint(net, paths[i], paths[j])) continue;
      if (evaluated == opts.pair_budget)
        throw BudgetExceededError("pair enumeration exceeded budget of " +
                                  std::to_string(opts.pair_budget) + " evaluations");
      ++evaluated;
      PathPair candidate{paths[i], paths[j], require_node_disjoint};
      ExactResult r = exact_pair_failure(net, candidate, opts);
      if (!found || r.probability < best_result.probability) {
        found = true;
        best_pair = std::move(candidate);
        best_result = r;
      }
    }
  }
  if (!found) throw InfeasibleError("no node-disjoint pair of s-t paths exists");
  return {best_pair, best_result};
}

int exact_resilience(const Network& net, const PathPair& pair,
                     const OracleOptions& opts) {
  require_valid_pair(net, pair);
  auto first = interior_nodes(net, pair.first);
  auto second = interior_nodes(net, pair.second);
  if (first.empty() || second.empty()) return kUnboundedResilience;
  auto uni = build_universe(net, first, second, opts.max_supplies);
  int card = opts.parallel ? detail::min_event_cardinality_parallel(uni.problem)
                           : detail::min_event_cardinality_serial(uni.problem);
  if (card < 0) return kUnboundedResilience;
  return card - 1;
}

}  // namespace idnet
