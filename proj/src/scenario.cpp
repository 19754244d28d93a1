#include "idnet/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "idnet/analytic.hpp"
#include "idnet/errors.hpp"
#include "idnet/optimize.hpp"
#include "idnet/rng.hpp"
#include "idnet/routing.hpp"
#include "idnet/sampler.hpp"

namespace idnet {

namespace {

// Fixed substream ids so that adding options never shifts existing draws.
enum : std::uint64_t {
  kStreamDemandCoords = 1,
  kStreamEdges = 2,
  kStreamSupplyCoords = 3,
  kStreamAssign = 4,
  kStreamPFail = 5,
};

std::string padded_id(char prefix, int index, int count) {
  int width = 1;
  for (int v = count - 1; v >= 10; v /= 10) ++width;
  std::string digits = std::to_string(index);
  std::string out(1, prefix);
  out.append(width - digits.size(), '0');
  out += digits;
  return out;
}

double sq_dist(const Coord& a, const Coord& b) {
  double dx = a[0] - b[0], dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

NetworkInput generate_topology(const Scenario& sc, const std::array<double, 4>& box) {
  if (sc.gen_demand_nodes < 2)
    throw Error("gen_scenario: need a topology file or >= 2 generated demand nodes");
  NetworkInput input;
  const int n = sc.gen_demand_nodes;
  SplitMix64 coords = SplitMix64::stream(sc.seed, kStreamDemandCoords);
  for (int i = 0; i < n; ++i) {
    DemandNodeInput node;
    node.id = padded_id('v', i, n);
    node.coord = Coord{coords.uniform(box[0], box[2]), coords.uniform(box[1], box[3])};
    input.demand_nodes.push_back(std::move(node));
  }
  // Random spanning tree, then extra edges among unused pairs.
  SplitMix64 edges = SplitMix64::stream(sc.seed, kStreamEdges);
  std::set<std::pair<int, int>> used;
  for (int i = 1; i < n; ++i) {
    int j = static_cast<int>(edges.below(i));
    used.insert({j, i});
  }
  for (int e = 0; e < sc.gen_extra_edges; ++e) {
    const std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (used.size() >= max_edges) break;
    while (true) {
      int a = static_cast<int>(edges.below(n));
      int b = static_cast<int>(edges.below(n));
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (used.insert({a, b}).second) break;
    }
  }
  for (const auto& [a, b] : used)
    input.edges.emplace_back(input.demand_nodes[a].id, input.demand_nodes[b].id);
  input.terminals = {input.demand_nodes.front().id, input.demand_nodes.back().id};
  return input;
}

}  // namespace

NetworkInput gen_scenario(const Scenario& sc) {
  if (sc.supply_count < 1) throw Error("gen_scenario: supply_count must be >= 1");

  std::array<double, 4> box = sc.box;
  bool box_unset = box[0] == 0.0 && box[1] == 0.0 && box[2] == 0.0 && box[3] == 0.0;
  if (box_unset && sc.topology) {
    bool any = false;
    for (const auto& v : sc.topology->demand_nodes) {
      if (!v.coord) continue;
      if (!any) {
        box = {(*v.coord)[0], (*v.coord)[1], (*v.coord)[0], (*v.coord)[1]};
        any = true;
      } else {
        box[0] = std::min(box[0], (*v.coord)[0]);
        box[1] = std::min(box[1], (*v.coord)[1]);
        box[2] = std::max(box[2], (*v.coord)[0]);
        box[3] = std::max(box[3], (*v.coord)[1]);
      }
    }
    if (!any) box = {0.0, 0.0, 1.0, 1.0};
  } else if (box_unset) {
    box = {0.0, 0.0, 1.0, 1.0};
  }
  if (!(box[2] >= box[0] && box[3] >= box[1]))
    throw Error("gen_scenario: malformed bounding box");

  NetworkInput input = sc.topology ? *sc.topology : generate_topology(sc, box);
  input.supply_nodes.clear();
  if (sc.terminals) input.terminals = sc.terminals;

  SplitMix64 coords = SplitMix64::stream(sc.seed, kStreamSupplyCoords);
  for (int i = 0; i < sc.supply_count; ++i) {
    SupplyNodeInput u;
    u.id = padded_id('u', i, sc.supply_count);
    u.coord = Coord{coords.uniform(box[0], box[2]), coords.uniform(box[1], box[3])};
    input.supply_nodes.push_back(std::move(u));
  }

  SplitMix64 assign = SplitMix64::stream(sc.seed, kStreamAssign);
  auto pick_random = [&](int want) {
    std::vector<int> chosen;
    std::vector<int> pool(sc.supply_count);
    for (int i = 0; i < sc.supply_count; ++i) pool[i] = i;
    want = std::min(want, sc.supply_count);
    for (int j = 0; j < want; ++j) {
      int at = static_cast<int>(assign.below(pool.size()));
      chosen.push_back(pool[at]);
      pool.erase(pool.begin() + at);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  };

  for (auto& v : input.demand_nodes) {
    v.supplies.clear();
    std::vector<int> chosen;
    switch (sc.assign) {
      case AssignRule::NearestK: {
        if (!v.coord)
          throw Error("gen_scenario: node '" + v.id + "' lacks coordinates for nearest-k");
        std::vector<int> order(sc.supply_count);
        for (int i = 0; i < sc.supply_count; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
          double da = sq_dist(*v.coord, *input.supply_nodes[a].coord);
          double db = sq_dist(*v.coord, *input.supply_nodes[b].coord);
          if (da != db) return da < db;
          return input.supply_nodes[a].id < input.supply_nodes[b].id;
        });
        for (int i = 0; i < std::min(sc.k, sc.supply_count); ++i)
          chosen.push_back(order[i]);
        break;
      }
      case AssignRule::RandomK:
        chosen = pick_random(sc.k);
        break;
      case AssignRule::RandomKInRange: {
        if (sc.k_min < 1 || sc.k_max < sc.k_min)
          throw Error("gen_scenario: malformed supply-count range");
        int want = sc.k_min + static_cast<int>(assign.below(sc.k_max - sc.k_min + 1));
        chosen = pick_random(want);
        break;
      }
    }
    for (int u : chosen) v.supplies.push_back(input.supply_nodes[u].id);
  }

  SplitMix64 pfail = SplitMix64::stream(sc.seed, kStreamPFail);
  for (auto& u : input.supply_nodes) {
    switch (sc.p_rule) {
      case PFailRule::Constant:
        u.p_fail = sc.p_const;
        break;
      case PFailRule::UniformRange:
        if (!(sc.p_lo >= 0.0 && sc.p_hi <= 1.0 && sc.p_lo <= sc.p_hi))
          throw Error("gen_scenario: p range outside [0, 1]");
        u.p_fail = pfail.uniform(sc.p_lo, sc.p_hi);
        break;
    }
  }
  return input;
}

// ---------------------------------------------------------------------------
// Experiment orchestration
// ---------------------------------------------------------------------------

namespace {

std::string join_ids(const Network& net, const Path& path) {
  std::string out;
  for (int v : path.nodes) {
    if (!out.empty()) out += ",";
    out += net.demand(v).id;
  }
  return out;
}

std::string join_pair(const Network& net, const PathPair& pair) {
  return join_ids(net, pair.first) + " | " + join_ids(net, pair.second);
}

// Oracle value when the instance fits under the cap, otherwise an
// importance-sampling estimate.
double route_value(const Network& net, const Path& path, const ExperimentSpec& spec) {
  try {
    return exact_path_failure(net, path, spec.oracle).probability;
  } catch (const BudgetExceededError&) {
    return estimate_path_failure(net, path, spec.epsilon, spec.delta, spec.seed).value;
  }
}

double route_value(const Network& net, const PathPair& pair, const ExperimentSpec& spec) {
  try {
    return exact_pair_failure(net, pair, spec.oracle).probability;
  } catch (const BudgetExceededError&) {
    return estimate_pair_failure(net, pair, spec.epsilon, spec.delta, spec.seed).value;
  }
}

double uniform_supply_probability(const Network& net) {
  if (net.supply_count() == 0) throw Error("network has no supply nodes");
  double p = net.supply(0).p_fail;
  for (int u = 1; u < net.supply_count(); ++u)
    if (net.supply(u).p_fail != p)
      throw Error("indicator interval needs a uniform supply failure probability");
  return p;
}

}  // namespace

std::map<std::string, MethodAggregate> aggregate_records(
    std::span<const ExperimentRecord> records) {
  std::map<std::string, MethodAggregate> out;
  for (const auto& rec : records) {
    if (!rec.error.empty()) continue;
    auto& agg = out[rec.method];
    if (agg.count == 0) {
      agg.min = agg.max = rec.value;
    } else {
      agg.min = std::min(agg.min, rec.value);
      agg.max = std::max(agg.max, rec.value);
    }
    agg.mean += rec.value;
    ++agg.count;
  }
  for (auto& [name, agg] : out) agg.mean /= agg.count;
  return out;
}

ExperimentReport run_experiment(std::span<const Network> nets,
                                const ExperimentSpec& spec) {
  ExperimentReport report;
  for (std::size_t trial = 0; trial < nets.size(); ++trial) {
    const Network& net = nets[trial];
    std::uint64_t trial_seed = SplitMix64::stream(spec.seed, trial).next();

    // Evaluation subject: an explicit path, or the approximation's output.
    Path subject;
    std::string subject_error;
    try {
      if (!spec.path_ids.empty())
        subject = path_from_ids(net, spec.path_ids);
      else
        subject = approx_reliable_path(net).path;
    } catch (const std::exception& e) {
      subject_error = e.what();
    }

    auto run = [&](const std::string& method, auto&& body) {
      ExperimentRecord rec;
      rec.trial = static_cast<int>(trial);
      rec.method = method;
      auto start = std::chrono::steady_clock::now();
      try {
        body(rec);
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      if (spec.timing) {
        auto stop = std::chrono::steady_clock::now();
        rec.runtime_ms =
            std::chrono::duration<double, std::milli>(stop - start).count();
      }
      report.records.push_back(std::move(rec));
    };

    for (const auto& method : spec.methods) {
      if (method == "indicators") {
        run("indicators-lo", [&](ExperimentRecord& rec) {
          if (!subject_error.empty()) throw Error(subject_error);
          double p = uniform_supply_probability(net);
          auto ind = indicators_single(net, subject);
          auto interval = approx_single(
              ind, p, spec.epsilon,
              static_cast<int>(interior_nodes(net, subject).size()), false);
          rec.value = interval.lo;
          rec.detail = join_ids(net, subject);
        });
        run("indicators-hi", [&](ExperimentRecord& rec) {
          if (!subject_error.empty()) throw Error(subject_error);
          double p = uniform_supply_probability(net);
          auto ind = indicators_single(net, subject);
          auto interval = approx_single(
              ind, p, spec.epsilon,
              static_cast<int>(interior_nodes(net, subject).size()), false);
          rec.value = interval.hi;
          rec.detail = join_ids(net, subject);
        });
      } else if (method == "bounds") {
        run("bounds-lower", [&](ExperimentRecord& rec) {
          if (!subject_error.empty()) throw Error(subject_error);
          rec.value = bounds_single(net, subject).lower;
          rec.detail = join_ids(net, subject);
        });
        run("bounds-upper", [&](ExperimentRecord& rec) {
          if (!subject_error.empty()) throw Error(subject_error);
          rec.value = bounds_single(net, subject).upper;
          rec.detail = join_ids(net, subject);
        });
      } else if (method == "sampling") {
        run(method, [&](ExperimentRecord& rec) {
          if (!subject_error.empty()) throw Error(subject_error);
          rec.value = estimate_path_failure(net, subject, spec.epsilon, spec.delta,
                                            trial_seed)
                          .value;
          rec.detail = join_ids(net, subject);
        });
      } else if (method == "naive") {
        run(method, [&](ExperimentRecord& rec) {
          if (!subject_error.empty()) throw Error(subject_error);
          rec.value = naive_monte_carlo(net, subject, spec.naive_trials, trial_seed).value;
          rec.detail = join_ids(net, subject);
        });
      } else if (method == "oracle") {
        run(method, [&](ExperimentRecord& rec) {
          if (!subject_error.empty()) throw Error(subject_error);
          rec.value = exact_path_failure(net, subject, spec.oracle).probability;
          rec.detail = join_ids(net, subject);
        });
      } else if (method == "best-path-approx") {
        run(method, [&](ExperimentRecord& rec) {
          auto result = approx_reliable_path(net);
          rec.value = route_value(net, result.path, spec);
          rec.detail = join_ids(net, result.path);
        });
      } else if (method == "best-path-maxcap") {
        run(method, [&](ExperimentRecord& rec) {
          auto result = max_capacity_path(net);
          rec.value = route_value(net, result.path, spec);
          rec.detail = join_ids(net, result.path);
        });
      } else if (method == "best-path-ilp") {
        run(method, [&](ExperimentRecord& rec) {
          auto sol = solve_exact(build_min_mbar(net));
          if (!sol.path) throw Error("min-mbar solve produced no path");
          rec.value = route_value(net, *sol.path, spec);
          rec.detail = join_ids(net, *sol.path);
        });
      } else if (method == "best-pair-heuristic") {
        run(method, [&](ExperimentRecord& rec) {
          auto result = reliable_pair_heuristic(net);
          rec.value = route_value(net, result.pair, spec);
          rec.detail = join_pair(net, result.pair);
        });
      } else if (method == "best-pair-ilp") {
        run(method, [&](ExperimentRecord& rec) {
          auto sol = solve_exact(build_min_weighted(net));
          if (!sol.pair) throw Error("min-weighted solve produced no pair");
          rec.value = route_value(net, *sol.pair, spec);
          rec.detail = join_pair(net, *sol.pair);
        });
      } else {
        run(method, [&](ExperimentRecord&) {
          throw Error("unknown experiment method '" + method + "'");
        });
      }
    }
  }
  report.aggregates = aggregate_records(report.records);
  return report;
}

}  // namespace idnet
