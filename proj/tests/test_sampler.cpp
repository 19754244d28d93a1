#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "idnet/errors.hpp"
#include "idnet/oracle.hpp"
#include "idnet/sampler.hpp"
#include "testutil.hpp"

using namespace idnet;
using testutil::chain_net;
using testutil::dnf_fixture;
using testutil::make_net;
using testutil::random_net;
using testutil::whole_chain;

TEST_CASE("iteration_count matches ceil(3 m ln(2/delta) / eps^2)") {
  CHECK(iteration_count(3, 0.1, 0.01) == 4769);
  CHECK(iteration_count(1, 0.5, 0.5) == 17);
  CHECK(iteration_count(10, 0.02, 0.01) == 397374);
  CHECK_THROWS_AS(iteration_count(0, 0.1, 0.1), Error);
  CHECK_THROWS_AS(iteration_count(3, 1.5, 0.1), Error);
  CHECK_THROWS_AS(iteration_count(3, 0.1, 0.0), Error);
}

TEST_CASE("single-clause paths are estimated exactly for any seed") {
  auto net = chain_net({{1, 2}}, 0.3);
  auto path = whole_chain(net);
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    auto est = estimate_path_failure(net, path, 0.2, 0.2, seed);
    CHECK(est.value == doctest::Approx(0.09).epsilon(1e-14));  // I == 1 always
    CHECK(est.successes_b == est.trials_a);
  }
}

TEST_CASE("two nodes with the same supply pair estimate close to 0.25") {
  auto net = chain_net({{1, 2}, {1, 2}}, 0.5);
  auto path = whole_chain(net);
  double exact = exact_path_failure(net, path).probability;
  CHECK(exact == 0.25);
  auto est = estimate_path_failure(net, path, 0.05, 0.05, 42);
  CHECK(std::abs(est.value - exact) <= 0.05 * exact);
}

TEST_CASE("the DNF fixture estimate lands within the contract band") {
  auto net = dnf_fixture();
  auto path = whole_chain(net);
  auto est = estimate_path_failure(net, path, 0.02, 0.01, 7);
  CHECK(std::abs(est.value - 9.0 / 16.0) <= 0.02 * 9.0 / 16.0);
  CHECK(est.trials_a == iteration_count(4, 0.02, 0.01));
  CHECK(est.value ==
        doctest::Approx(static_cast<double>(est.successes_b) / est.trials_a *
                        est.weight_sum));
}

TEST_CASE("identical seeds give identical estimates") {
  auto net = dnf_fixture();
  auto path = whole_chain(net);
  auto a = estimate_path_failure(net, path, 0.1, 0.1, 12345);
  auto b = estimate_path_failure(net, path, 0.1, 0.1, 12345);
  CHECK(a.value == b.value);
  CHECK(a.successes_b == b.successes_b);
  auto c = estimate_path_failure(net, path, 0.1, 0.1, 12346);
  CHECK(c.successes_b != a.successes_b);  // different stream
}

TEST_CASE("serial and parallel trial kernels count identically") {
  auto net = dnf_fixture();
  auto instance = detail::path_instance(net, whole_chain(net));
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto serial = detail::count_hits_serial(instance, 50000, seed);
    auto parallel = detail::count_hits_parallel(instance, 50000, seed);
    CHECK(serial == parallel);
  }
  auto ns = detail::count_event_trials_serial(instance, 50000, 9);
  auto np = detail::count_event_trials_parallel(instance, 50000, 9);
  CHECK(ns == np);
}

TEST_CASE("zero normalizer returns exact zero with no trials") {
  auto net = chain_net({{1}, {2}}, 0.0);
  auto est = estimate_path_failure(net, whole_chain(net), 0.1, 0.1, 5);
  CHECK(est.value == 0.0);
  CHECK(est.trials_a == 0);
  CHECK(est.weight_sum == 0.0);
}

TEST_CASE("estimates track the oracle on random small instances") {
  SplitMix64 rng(31);
  for (int round = 0; round < 20; ++round) {
    testutil::RandomNetOptions opt;
    opt.supply_count = 6;
    auto net = random_net(rng, opt);
    auto paths = testutil::all_paths(net);
    if (paths.empty() || interior_nodes(net, paths[0]).empty()) continue;
    double exact = exact_path_failure(net, paths[0]).probability;
    if (exact == 0.0) continue;
    auto est = estimate_path_failure(net, paths[0], 0.05, 0.01, 1000 + round);
    CHECK(std::abs(est.value - exact) <= 0.05 * exact);
  }
}

TEST_CASE("pair estimator: identical paths match the single-path estimate") {
  auto net = dnf_fixture();
  auto path = whole_chain(net);
  double exact = exact_path_failure(net, path).probability;
  auto est = estimate_pair_failure(net, {path, path, false}, 0.05, 0.01, 77);
  CHECK(std::abs(est.value - exact) <= 0.05 * exact);
}

TEST_CASE("pair estimator: supply-disjoint single-node paths") {
  auto net = make_net(
      {{"u1", 0.1}, {"u2", 0.2}},
      {{"s", {}}, {"a", {"u1"}}, {"b", {"u2"}}, {"t", {}}},
      {{"s", "a"}, {"a", "t"}, {"s", "b"}, {"b", "t"}},
      std::pair<std::string, std::string>{"s", "t"});
  Path pa = path_from_ids(net, std::vector<std::string>{"s", "a", "t"});
  Path pb = path_from_ids(net, std::vector<std::string>{"s", "b", "t"});
  PathPair pair{pa, pb, true};
  CHECK(exact_pair_failure(net, pair).probability == doctest::Approx(0.02).epsilon(1e-13));
  auto est = estimate_pair_failure(net, pair, 0.05, 0.01, 3);
  CHECK(std::abs(est.value - 0.02) <= 0.05 * 0.02 + 1e-12);
}

TEST_CASE("pair estimator tracks the oracle on a random 6-supply instance") {
  SplitMix64 rng(37);
  int seen = 0;
  for (int round = 0; round < 40 && seen < 8; ++round) {
    testutil::RandomNetOptions opt;
    opt.supply_count = 6;
    auto net = random_net(rng, opt);
    auto paths = testutil::all_paths(net);
    if (paths.size() < 2) continue;
    PathPair pair{paths[0], paths[1], false};
    if (interior_nodes(net, pair.first).empty() ||
        interior_nodes(net, pair.second).empty())
      continue;
    double exact = exact_pair_failure(net, pair).probability;
    if (exact <= 0.0) continue;
    ++seen;
    auto est = estimate_pair_failure(net, pair, 0.05, 0.01, 500 + round);
    CHECK(std::abs(est.value - exact) <= 0.05 * exact);
  }
  CHECK(seen >= 5);
}

TEST_CASE("unbiasedness: the mean over seeds converges to the oracle value") {
  auto net = chain_net({{1, 2}, {2, 3}, {3, 1}}, 0.3);
  auto path = whole_chain(net);
  double exact = exact_path_failure(net, path).probability;
  const int runs = 200;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < runs; ++i) {
    // Loose epsilon keeps each run cheap; the mean is what matters here.
    auto est = estimate_path_failure(net, path, 0.3, 0.3, 90000 + i);
    sum += est.value;
    sum_sq += est.value * est.value;
  }
  double mean = sum / runs;
  double var = (sum_sq - runs * mean * mean) / (runs - 1);
  double stderr_mean = std::sqrt(var / runs);
  CHECK(std::abs(mean - exact) <= 3.0 * stderr_mean);
}

TEST_CASE("conditional uniformity: all failed clauses are chosen equally often") {
  auto net = dnf_fixture();
  auto instance = detail::path_instance(net, whole_chain(net));
  // Bucket trials by failed-supply set; within each bucket every failing
  // clause must be the chosen one with frequency ~ 1 / (#failing clauses).
  std::map<std::vector<std::uint8_t>, std::map<int, int>> chosen_by_set;
  std::map<std::vector<std::uint8_t>, int> total_by_set;
  std::vector<std::uint8_t> failed;
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(4242, t);
    auto trial = detail::run_trial(instance, rng, failed);
    std::vector<std::uint8_t> key(failed.size());
    for (std::size_t i = 0; i < failed.size(); ++i) key[i] = failed[i] ? 1 : 0;
    ++chosen_by_set[key][trial.chosen];
    ++total_by_set[key];
  }
  int checked = 0;
  for (const auto& [key, counts] : chosen_by_set) {
    int total = total_by_set[key];
    if (total < 2000) continue;
    // Count failing clauses under this supply-failure set.
    int failing = 0;
    for (const auto& clause : instance.clauses) {
      bool all = true;
      for (int s : clause.slots)
        if (!key[s]) all = false;
      if (all) ++failing;
    }
    REQUIRE(failing >= 1);
    double expected = static_cast<double>(total) / failing;
    double sigma = std::sqrt(expected * (1.0 - 1.0 / failing));
    for (const auto& [clause, count] : counts) {
      CHECK(std::abs(count - expected) <= 4.0 * sigma + 1.0);
      ++checked;
    }
  }
  CHECK(checked >= 4);
}

TEST_CASE("naive Monte Carlo hits the endpoints and the fixture value") {
  auto certain = chain_net({{1}}, 1.0);
  CHECK(naive_monte_carlo(certain, whole_chain(certain), 1000, 1).value == 1.0);

  auto safe = chain_net({{1}}, 0.0);
  CHECK(naive_monte_carlo(safe, whole_chain(safe), 1000, 1).value == 0.0);

  auto net = dnf_fixture();
  const std::uint64_t trials = 400000;
  auto est = naive_monte_carlo(net, whole_chain(net), trials, 5);
  double p = 9.0 / 16.0;
  double sigma = std::sqrt(p * (1 - p) / static_cast<double>(trials));
  CHECK(std::abs(est.value - p) <= 3.0 * sigma);
}

TEST_CASE("naive Monte Carlo on a pair") {
  auto net = make_net(
      {{"u1", 0.4}, {"u2", 0.5}},
      {{"s", {}}, {"a", {"u1"}}, {"b", {"u2"}}, {"t", {}}},
      {{"s", "a"}, {"a", "t"}, {"s", "b"}, {"b", "t"}},
      std::pair<std::string, std::string>{"s", "t"});
  Path pa = path_from_ids(net, std::vector<std::string>{"s", "a", "t"});
  Path pb = path_from_ids(net, std::vector<std::string>{"s", "b", "t"});
  auto est = naive_monte_carlo(net, PathPair{pa, pb, true}, 200000, 11);
  double p = 0.2;
  double sigma = std::sqrt(p * (1 - p) / 200000.0);
  CHECK(std::abs(est.value - p) <= 3.5 * sigma);
}
