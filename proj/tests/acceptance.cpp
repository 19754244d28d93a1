// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "idnet/analytic.hpp"
#include "idnet/errors.hpp"
#include "idnet/io.hpp"
#include "idnet/optimize.hpp"
#include "idnet/oracle.hpp"
#include "idnet/routing.hpp"
#include "idnet/sampler.hpp"
#include "testutil.hpp"

using namespace idnet;
using testutil::all_disjoint_pairs;
using testutil::all_paths;
using testutil::chain_net;
using testutil::dnf_fixture;
using testutil::interior_length_sum;
using testutil::random_net;
using testutil::whole_chain;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

// Random chain network: `interior` nodes, supply sets of size 1..max_k out
// of `universe` supplies, probabilities from [p_lo, p_hi].
Network random_chain(SplitMix64& rng, int interior, int universe, int max_k,
                     double p_lo, double p_hi) {
  NetworkInput input;
  for (int u = 0; u < universe; ++u)
    input.supply_nodes.push_back(
        {"u" + std::to_string(u), rng.uniform(p_lo, p_hi), std::nullopt});
  input.demand_nodes.push_back({"s", {}, std::nullopt});
  std::string prev = "s";
  for (int i = 0; i < interior; ++i) {
    DemandNodeInput node;
    node.id = "v" + std::to_string(i + 1);
    int k = 1 + static_cast<int>(rng.below(max_k));
    while (static_cast<int>(node.supplies.size()) < k) {
      std::string u = "u" + std::to_string(rng.below(universe));
      if (std::find(node.supplies.begin(), node.supplies.end(), u) ==
          node.supplies.end())
        node.supplies.push_back(u);
    }
    input.demand_nodes.push_back(std::move(node));
    input.edges.push_back({prev, input.demand_nodes.back().id});
    prev = input.demand_nodes.back().id;
  }
  input.demand_nodes.push_back({"t", {}, std::nullopt});
  input.edges.push_back({prev, "t"});
  input.terminals = {{"s"}, {"t"}};
  return Network::from_input(input);
}

// Two parallel chains from s to t ("a..." and "b..."), for pair criteria.
Network random_parallel(SplitMix64& rng, int m1, int m2, int universe, int max_k,
                        double p_lo, double p_hi) {
  NetworkInput input;
  for (int u = 0; u < universe; ++u)
    input.supply_nodes.push_back(
        {"u" + std::to_string(u), rng.uniform(p_lo, p_hi), std::nullopt});
  input.demand_nodes.push_back({"s", {}, std::nullopt});
  auto add_chain = [&](char prefix, int len) {
    std::string prev = "s";
    for (int i = 0; i < len; ++i) {
      DemandNodeInput node;
      node.id = std::string(1, prefix) + std::to_string(i + 1);
      int k = 1 + static_cast<int>(rng.below(max_k));
      while (static_cast<int>(node.supplies.size()) < k) {
        std::string u = "u" + std::to_string(rng.below(universe));
        if (std::find(node.supplies.begin(), node.supplies.end(), u) ==
            node.supplies.end())
          node.supplies.push_back(u);
      }
      input.demand_nodes.push_back(std::move(node));
      input.edges.push_back({prev, input.demand_nodes.back().id});
      prev = input.demand_nodes.back().id;
    }
    return prev;
  };
  std::string a_end = add_chain('a', m1);
  std::string b_end = add_chain('b', m2);
  input.demand_nodes.push_back({"t", {}, std::nullopt});
  input.edges.push_back({a_end, "t"});
  input.edges.push_back({b_end, "t"});
  input.terminals = {{"s"}, {"t"}};
  return Network::from_input(input);
}

PathPair parallel_pair(const Network& net) {
  auto paths = all_paths(net);
  return {paths[0], paths[1], true};
}

Network with_uniform_p(const Network& base, double p) {
  NetworkInput input;
  for (int u = 0; u < base.supply_count(); ++u)
    input.supply_nodes.push_back({base.supply(u).id, p, std::nullopt});
  for (int v = 0; v < base.demand_count(); ++v) {
    const auto& d = base.demand(v);
    DemandNodeInput node;
    node.id = d.id;
    for (int u : d.supplies) node.supplies.push_back(base.supply(u).id);
    input.demand_nodes.push_back(std::move(node));
  }
  for (auto [a, b] : base.edges())
    input.edges.push_back({base.demand(a).id, base.demand(b).id});
  input.terminals = {base.demand(base.source()).id, base.demand(base.target()).id};
  return Network::from_input(input);
}

// --------------------------------------------------------------------------
// Criterion 1: DNF fixture exactness and sampler coverage.
// --------------------------------------------------------------------------
Outcome criterion1() {
  auto net = dnf_fixture();
  auto path = whole_chain(net);
  auto exact = exact_path_failure(net, path);
  if (exact.probability != 9.0 / 16.0)
    return {false, "oracle value " + std::to_string(exact.probability) + " != 9/16"};

  const double target = 9.0 / 16.0;
  int within = 0;
  for (int seed = 1; seed <= 100; ++seed) {
    auto est = estimate_path_failure(net, path, 0.02, 0.01, seed);
    if (std::abs(est.value - target) <= 0.02 * target) ++within;
  }
  std::ostringstream detail;
  detail << "oracle exact 9/16; sampler within band in " << within << "/100 runs";
  return {within >= 95, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 2: (epsilon, delta) estimator contract vs the oracle.
// --------------------------------------------------------------------------
Outcome criterion2() {
  const double eps = 0.05, delta = 0.1;
  const double allowed = delta * 100 + 3 * std::sqrt(delta * (1 - delta) * 100);

  SplitMix64 rng(20250801);
  int path_misses = 0;
  for (int i = 0; i < 100; ++i) {
    int interior = 1 + static_cast<int>(rng.below(5));
    auto net = random_chain(rng, interior, 12, 3, 0.05, 0.5);
    auto path = whole_chain(net);
    double exact = exact_path_failure(net, path).probability;
    auto est = estimate_path_failure(net, path, eps, delta, 7000 + i);
    if (std::abs(est.value - exact) > eps * exact) ++path_misses;
  }

  int pair_misses = 0;
  for (int i = 0; i < 100; ++i) {
    int m1 = 1 + static_cast<int>(rng.below(3));
    int m2 = 1 + static_cast<int>(rng.below(3));
    auto net = random_parallel(rng, m1, m2, 12, 3, 0.05, 0.5);
    auto pair = parallel_pair(net);
    double exact = exact_pair_failure(net, pair).probability;
    auto est = estimate_pair_failure(net, pair, eps, delta, 8000 + i);
    if (std::abs(est.value - exact) > eps * exact) ++pair_misses;
  }

  std::ostringstream detail;
  detail << "path misses " << path_misses << ", pair misses " << pair_misses
         << " (allowed " << allowed << ")";
  return {path_misses <= allowed && pair_misses <= allowed, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 3: sandwich containment plus the printed corollary interval.
// --------------------------------------------------------------------------
Outcome criterion3() {
  const double eps = 0.1;
  SplitMix64 rng(20250802);
  int single_ok = 0;
  for (int i = 0; i < 100; ++i) {
    int interior = 2 + static_cast<int>(rng.below(3));
    double p = (eps / interior) * rng.uniform(0.2, 1.0);
    auto net = random_chain(rng, interior, 8, 3, p, p);
    auto net_u = with_uniform_p(net, p);
    auto path = whole_chain(net_u);
    auto ind = indicators_single(net_u, path);
    auto interval = approx_single(ind, p, eps, interior, false);
    double exact = exact_path_failure(net_u, path).probability;
    if (exact >= interval.lo - 1e-12 && exact <= interval.hi + 1e-12) ++single_ok;
  }

  int pair_ok = 0;
  for (int i = 0; i < 100; ++i) {
    int m1 = 1 + static_cast<int>(rng.below(3));
    int m2 = 1 + static_cast<int>(rng.below(3));
    double p = (eps / (m1 * m2)) * rng.uniform(0.2, 1.0);
    auto net = with_uniform_p(random_parallel(rng, m1, m2, 8, 3, p, p), p);
    auto pair = parallel_pair(net);
    auto ind = indicators_pair(net, pair);
    auto interval = approx_pair(ind, p, eps, m1, m2);
    double exact = exact_pair_failure(net, pair).probability;
    if (exact >= interval.lo - 1e-12 && exact <= interval.hi + 1e-12) ++pair_ok;
  }

  PathIndicators printed;
  printed.n_s_min = 2;
  printed.m_bar = 8;
  auto interval = approx_single(printed, 1e-2, 0.04, 8, true);
  bool corollary = std::abs(interval.lo - 7.68e-4) <= 1e-10 &&
                   std::abs(interval.hi - 8.00e-4) <= 1e-10;

  std::ostringstream detail;
  detail << "single " << single_ok << "/100, pair " << pair_ok
         << "/100, corollary interval [" << interval.lo << ", " << interval.hi << "]";
  return {single_ok == 100 && pair_ok == 100 && corollary, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 4: bounds containment, ratio cap, appendix inequalities.
// --------------------------------------------------------------------------
Outcome criterion4() {
  SplitMix64 rng(20250803);
  int contained = 0, capped = 0, evaluated = 0;
  while (evaluated < 200) {
    auto net = random_net(rng);
    auto paths = all_paths(net);
    if (paths.empty() || interior_nodes(net, paths[0]).empty()) continue;
    ++evaluated;
    auto bounds = bounds_single(net, paths[0]);
    double exact = exact_path_failure(net, paths[0]).probability;
    if (bounds.lower <= exact + 1e-12 && exact <= bounds.upper + 1e-12) ++contained;
    if (bounds.upper <= bounds.ratio_cap * bounds.lower + 1e-12 || bounds.lower == 0.0)
      ++capped;
  }

  int product_ok = 0;
  for (int i = 0; i < 100000; ++i) {
    double p1 = rng.uniform(1e-9, 1.0 - 1e-9);
    double p2 = rng.uniform(1e-9, 1.0 - 1e-9);
    double alpha = rng.uniform(1e-9, 1.0);
    double beta = rng.uniform(1e-9, 1.0);
    double lhs = 1.0 - std::pow(1.0 - p1 * p2, alpha * beta);
    double rhs = (1.0 - std::pow(1.0 - p1, alpha)) * (1.0 - std::pow(1.0 - p2, beta));
    if (rhs - lhs >= -1e-12) ++product_ok;
  }

  int survival_ok = 0;
  for (int i = 0; i < 100000; ++i) {
    int k = 1 + static_cast<int>(rng.below(4));
    int nd_max = 1;
    double p_v = 1.0, pt_v = 1.0;
    for (int j = 0; j < k; ++j) {
      double p = rng.uniform(1e-6, 1.0 - 1e-6);
      int nd = 1 + static_cast<int>(rng.below(5));
      nd_max = std::max(nd_max, nd);
      p_v *= p;
      pt_v *= 1.0 - std::pow(1.0 - p, 1.0 / nd);
    }
    double cap = std::pow(nd_max, k);
    if (1.0 - p_v >= std::pow(1.0 - pt_v, cap) - 1e-12) ++survival_ok;
  }

  std::ostringstream detail;
  detail << "containment " << contained << "/200, ratio cap " << capped
         << "/200, product inequality " << product_ok << "/100000, survival "
         << survival_ok << "/100000";
  return {contained == 200 && capped == 200 && product_ok == 100000 &&
              survival_ok == 100000,
          detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 5: reliable-path approximation guarantee.
// --------------------------------------------------------------------------
Outcome criterion5() {
  SplitMix64 rng(20250804);
  int factor_ok = 0, exact_ok = 0, general = 0, independent = 0;
  while (general < 70) {
    testutil::RandomNetOptions opt;
    opt.min_nodes = 8;
    opt.max_nodes = 12;
    opt.extra_edges = 3;
    auto net = random_net(rng, opt);
    if (all_paths(net).empty()) continue;
    ++general;
    auto result = approx_reliable_path(net);
    auto [best_path, best] = exact_best_path(net);
    double got = exact_path_failure(net, result.path).probability;
    double cap = std::pow(std::max(1, net.max_demands_per_supply()),
                          net.max_supplies_per_demand());
    if (got <= cap * best.probability + 1e-12) ++factor_ok;
  }
  while (independent < 30) {
    testutil::RandomNetOptions opt;
    opt.min_nodes = 8;
    opt.max_nodes = 9;
    opt.extra_edges = 3;
    opt.k_max = 2;
    opt.single_demand_per_supply = true;
    auto net = random_net(rng, opt);
    if (all_paths(net).empty()) continue;
    ++independent;
    auto result = approx_reliable_path(net);
    auto [best_path, best] = exact_best_path(net);
    double got = exact_path_failure(net, result.path).probability;
    double cap = std::pow(std::max(1, net.max_demands_per_supply()),
                          net.max_supplies_per_demand());
    if (got <= cap * best.probability + 1e-12) ++factor_ok;
    if (std::abs(got - best.probability) <= 1e-12) ++exact_ok;
  }
  std::ostringstream detail;
  detail << "factor " << factor_ok << "/100, exact at n_d=1 " << exact_ok << "/30";
  return {factor_ok == 100 && exact_ok == 30, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 6: ILP optimality against brute force.
// --------------------------------------------------------------------------
Outcome criterion6() {
  SplitMix64 rng(20250805);
  int mbar_ok = 0, maxd_ok = 0, lex_ok = 0, instances = 0;
  while (instances < 50) {
    testutil::RandomNetOptions opt;
    opt.min_nodes = 8;
    opt.max_nodes = 12;
    opt.extra_edges = 3;
    auto net = random_net(rng, opt);
    auto paths = all_paths(net);
    if (paths.empty()) continue;
    ++instances;

    // Brute force over paths: max bottleneck, then min distinct-set count.
    int best_k = -1;
    for (const auto& path : paths) {
      int k = INT_MAX;
      for (int v : interior_nodes(net, path))
        k = std::min(k, static_cast<int>(net.demand(v).supplies.size()));
      best_k = std::max(best_k, k);
    }
    std::int64_t best_m = -1;
    for (const auto& path : paths) {
      int k = INT_MAX;
      for (int v : interior_nodes(net, path))
        k = std::min(k, static_cast<int>(net.demand(v).supplies.size()));
      if (k != best_k) continue;
      std::set<std::vector<int>> sets;
      for (int v : interior_nodes(net, path))
        if (static_cast<int>(net.demand(v).supplies.size()) == best_k)
          sets.insert(net.demand(v).supplies);
      auto count = static_cast<std::int64_t>(sets.size());
      if (best_m < 0 || count < best_m) best_m = count;
    }
    auto mbar_sol = solve_exact(build_min_mbar(net));
    if (mbar_sol.status == SolveStatus::Optimal &&
        static_cast<std::int64_t>(mbar_sol.objective) == best_m)
      ++mbar_ok;

    auto pairs = all_disjoint_pairs(net);
    auto maxd_sol = solve_exact(build_max_d(net));
    auto lex_sol = solve_exact(build_min_weighted(net));
    if (pairs.empty()) {
      if (maxd_sol.status == SolveStatus::Infeasible) ++maxd_ok;
      if (lex_sol.status == SolveStatus::Infeasible) ++lex_ok;
      continue;
    }
    int best_d = -1;
    for (const auto& pair : pairs) best_d = std::max(best_d, exact_resilience(net, pair));
    if (maxd_sol.status == SolveStatus::Optimal && *maxd_sol.resilience == best_d)
      ++maxd_ok;

    std::int64_t best_union = -1;
    for (const auto& pair : pairs) {
      if (exact_resilience(net, pair) != best_d) continue;
      auto count = indicators_pair(net, pair).m_bar;
      if (best_union < 0 || count < best_union) best_union = count;
    }
    if (lex_sol.status == SolveStatus::Optimal && *lex_sol.resilience == best_d &&
        *lex_sol.min_union_count == best_union)
      ++lex_ok;
  }
  std::ostringstream detail;
  detail << "min-mbar " << mbar_ok << "/50, max-d " << maxd_ok << "/50, lexicographic "
         << lex_ok << "/50";
  return {mbar_ok == 50 && maxd_ok == 50 && lex_ok == 50, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 7: pair heuristic surrogate optimality and ILP consistency.
// --------------------------------------------------------------------------
Outcome criterion7() {
  SplitMix64 rng(20250806);
  const double p = 0.01;
  int surrogate_ok = 0, ordered = 0, ordered_strict = 0, instances = 0;
  while (instances < 50) {
    testutil::RandomNetOptions opt;
    opt.min_nodes = 8;
    opt.max_nodes = 12;
    opt.extra_edges = 4;
    opt.uniform_p = true;
    opt.uniform_p_value = p;
    auto net = random_net(rng, opt);
    auto pairs = all_disjoint_pairs(net);
    if (pairs.empty()) continue;
    ++instances;

    auto lengths = node_lengths(net);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pair : pairs)
      best = std::min(best, interior_length_sum(net, lengths, pair.first) +
                                interior_length_sum(net, lengths, pair.second));
    auto heuristic = reliable_pair_heuristic(net);
    if (std::abs(heuristic.total_surrogate_length - best) <=
        1e-9 * std::max(1.0, best))
      ++surrogate_ok;

    auto ilp = solve_exact(build_min_weighted(net));
    if (ilp.status != SolveStatus::Optimal || !ilp.pair) continue;
    double heur_prob = exact_pair_failure(net, heuristic.pair).probability;
    double ilp_prob = exact_pair_failure(net, *ilp.pair).probability;
    // The indicator objective resolves the ordering only up to the pair
    // sandwich factor (1 - eps_h) / (1 + eps_i) with eps = p * m1 * m2.
    auto pair_eps = [&](const PathPair& pair) {
      double m1 = interior_nodes(net, pair.first).size();
      double m2 = interior_nodes(net, pair.second).size();
      return p * m1 * m2;
    };
    double slack = (1.0 - pair_eps(heuristic.pair)) / (1.0 + pair_eps(*ilp.pair));
    if (heur_prob >= ilp_prob * slack - 1e-15) ++ordered;
    if (heur_prob >= ilp_prob - 1e-15) ++ordered_strict;
  }
  std::ostringstream detail;
  detail << "surrogate optimal " << surrogate_ok << "/50, ilp-ordered " << ordered
         << "/50 within sandwich slack (" << ordered_strict << " strict)";
  return {surrogate_ok == 50 && ordered == 50, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 8: redundancy reduction preserves the exact failure event.
// --------------------------------------------------------------------------
Outcome criterion8() {
  SplitMix64 rng(20250807);
  int equal = 0;
  for (int i = 0; i < 100; ++i) {
    int interior = 2 + static_cast<int>(rng.below(5));
    auto net = random_chain(rng, interior, 8, 3, 0.05, 0.5);
    auto path = whole_chain(net);
    auto reduced = reduce_redundant(net, path);

    // Evaluate both node lists over the same supply universe so that the
    // two enumerations add identical terms; equal events give bit-identical
    // sums.
    auto full_nodes = interior_nodes(net, path);
    std::vector<int> slots;
    for (int v : full_nodes)
      for (int u : net.demand(v).supplies) slots.push_back(u);
    std::sort(slots.begin(), slots.end());
    slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
    auto mask_of = [&](int v) {
      std::uint64_t mask = 0;
      for (int u : net.demand(v).supplies) {
        auto at = std::lower_bound(slots.begin(), slots.end(), u) - slots.begin();
        mask |= std::uint64_t{1} << at;
      }
      return mask;
    };
    detail::EnumProblem full, red;
    for (int u : slots) {
      full.p.push_back(net.supply(u).p_fail);
      red.p.push_back(net.supply(u).p_fail);
    }
    for (int v : full_nodes) full.first_masks.push_back(mask_of(v));
    for (int v : reduced) red.first_masks.push_back(mask_of(v));
    if (detail::event_probability_serial(full) ==
        detail::event_probability_serial(red))
      ++equal;
  }
  return {equal == 100, "bit-identical on " + std::to_string(equal) + "/100 paths"};
}

// --------------------------------------------------------------------------
// Criterion 9: byte-identical reruns of seeded CLI commands.
// --------------------------------------------------------------------------
std::string run_capture(const std::string& args) {
  std::string cmd = std::string(IDNET_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::string output;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
  pclose(pipe);
  return output;
}

Outcome criterion9() {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "idnet_acceptance";
  fs::create_directories(dir);
  auto net_file = (dir / "det.json").string();
  {
    auto net = dnf_fixture();
    std::ofstream out(net_file);
    out << network_to_json(net);
  }

  std::vector<std::string> commands = {
      "gen-scenario --gen-nodes 9 --gen-edges 4 --supplies 7 --assign random-range "
      "--k-min 1 --k-max 3 --p-range 0.005,0.015 --seed 99",
      "eval-path --net " + net_file +
          " --path s,v1,v2,v3,v4,t --method sampling --epsilon 0.05 --delta 0.05 "
          "--seed 17 --json",
      "best-pair --net " + net_file + " --method ilp --json",
  };
  int stable = 0;
  for (const auto& cmd : commands) {
    std::string first = run_capture(cmd);
    bool same = !first.empty();
    for (int rerun = 1; rerun < 3; ++rerun)
      same = same && run_capture(cmd) == first;
    if (same) ++stable;
  }
  return {stable == 3,
          std::to_string(stable) + "/3 commands byte-identical across 3 reruns"};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Entry> entries = {
      {1, "DNF fixture exactness and sampler coverage", criterion1},
      {2, "estimator (epsilon, delta) contract", criterion2},
      {3, "sandwich theorems and corollary interval", criterion3},
      {4, "bounds and appendix inequalities", criterion4},
      {5, "reliable-path approximation factor", criterion5},
      {6, "ILP optimality vs brute force", criterion6},
      {7, "pair heuristic surrogate optimality", criterion7},
      {8, "redundancy reduction preserves the oracle", criterion8},
      {9, "seeded CLI determinism", criterion9},
  };

  bool all_pass = true;
  for (const auto& entry : entries) {
    if (only != 0 && entry.id != only) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s — %s (%.1fs)\n",
                outcome.pass ? "PASS" : "FAIL", entry.id, entry.name,
                outcome.detail.c_str(), secs);
    std::fflush(stdout);
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
