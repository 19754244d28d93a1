// Command-line front door for the interdependent-network routing library.
//
// Exit codes: 0 success, 1 usage or data error, 2 infeasible/disconnected,
// 3 enumeration or solver budget exceeded.

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idnet/analytic.hpp"
#include "idnet/errors.hpp"
#include "idnet/io.hpp"
#include "idnet/optimize.hpp"
#include "idnet/oracle.hpp"
#include "idnet/routing.hpp"
#include "idnet/sampler.hpp"
#include "idnet/scenario.hpp"
#include "json.hpp"

namespace {

using idnet::Network;
using idnet::Path;
using idnet::PathPair;
using json = nlohmann::ordered_json;

std::vector<std::string> split_ids(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

Path parse_path(const Network& net, const std::string& csv) {
  auto ids = split_ids(csv);
  Path path = idnet::path_from_ids(net, ids);
  auto violations = idnet::check_path(net, path);
  if (!violations.empty())
    throw idnet::Error("invalid path: [" + violations.front().element + "] " +
                       violations.front().message);
  return path;
}

json path_json(const Network& net, const Path& path) {
  return json(idnet::path_to_ids(net, path));
}

void emit(const json& doc, bool as_json, const std::string& human) {
  if (as_json)
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << human;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

struct EvalArgs {
  std::string net_file;
  std::string path_csv, path2_csv;
  std::string method = "sampling";
  double epsilon = 0.05;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::uint64_t trials = 100000;
  bool disjoint = false;
  bool as_json = false;
};

json estimate_json(const idnet::Estimate& est) {
  return json{{"value", est.value},
              {"epsilon", est.epsilon},
              {"delta", est.delta},
              {"trials_a", est.trials_a},
              {"successes_b", est.successes_b},
              {"weight_sum", est.weight_sum},
              {"seed", est.seed}};
}

int run_eval_path(const EvalArgs& args) {
  Network net = idnet::load_network(args.net_file);
  Path path = parse_path(net, args.path_csv);
  json doc{{"command", "eval-path"},
           {"network", args.net_file},
           {"path", path_json(net, path)},
           {"method", args.method}};
  double value = 0.0;
  if (args.method == "sampling") {
    auto est = idnet::estimate_path_failure(net, path, args.epsilon, args.delta, args.seed);
    doc.update(estimate_json(est));
    value = est.value;
  } else if (args.method == "naive") {
    auto est = idnet::naive_monte_carlo(net, path, args.trials, args.seed);
    doc.update(estimate_json(est));
    value = est.value;
  } else if (args.method == "oracle") {
    auto r = idnet::exact_path_failure(net, path);
    doc["value"] = r.probability;
    doc["enumerated_supply_count"] = r.enumerated_supply_count;
    doc["enumeration_size"] = r.enumeration_size;
    value = r.probability;
  } else {
    throw CLI::ValidationError("--method", "unknown method '" + args.method + "'");
  }
  emit(doc, args.as_json,
       "path failure probability (" + args.method + "): " + fmt(value) + "\n");
  return 0;
}

int run_eval_pair(const EvalArgs& args) {
  Network net = idnet::load_network(args.net_file);
  PathPair pair{parse_path(net, args.path_csv), parse_path(net, args.path2_csv),
                args.disjoint};
  auto violations = idnet::check_pair(net, pair);
  if (!violations.empty())
    throw idnet::Error("invalid pair: [" + violations.front().element + "] " +
                       violations.front().message);
  json doc{{"command", "eval-pair"},
           {"network", args.net_file},
           {"path", path_json(net, pair.first)},
           {"path2", path_json(net, pair.second)},
           {"method", args.method}};
  double value = 0.0;
  if (args.method == "sampling") {
    auto est = idnet::estimate_pair_failure(net, pair, args.epsilon, args.delta, args.seed);
    doc.update(estimate_json(est));
    value = est.value;
  } else if (args.method == "naive") {
    auto est = idnet::naive_monte_carlo(net, pair, args.trials, args.seed);
    doc.update(estimate_json(est));
    value = est.value;
  } else if (args.method == "oracle") {
    auto r = idnet::exact_pair_failure(net, pair);
    doc["value"] = r.probability;
    doc["enumerated_supply_count"] = r.enumerated_supply_count;
    value = r.probability;
  } else {
    throw CLI::ValidationError("--method", "unknown method '" + args.method + "'");
  }
  emit(doc, args.as_json,
       "pair failure probability (" + args.method + "): " + fmt(value) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("INTERDEP_ROUTE_THREADS")) {
    int n = std::atoi(threads);
    if (n > 0) omp_set_num_threads(n);
  }

  CLI::App app{"Reliability of routes in interdependent networks"};
  app.require_subcommand(1);

  // ---- validate ----------------------------------------------------------
  std::string net_file;
  bool as_json = false;
  auto* validate = app.add_subcommand("validate", "check a network file");
  validate->add_option("network", net_file)->required();
  validate->add_flag("--json", as_json);

  // ---- gen-scenario ------------------------------------------------------
  auto* gen = app.add_subcommand("gen-scenario", "generate a supplied network");
  idnet::Scenario scenario;
  std::string topology_file, assign = "nearest", p_range, box_csv, terminals_csv,
                             out_file;
  double p_const = 0.01;
  gen->add_option("--topology", topology_file, "demand topology file");
  gen->add_option("--gen-nodes", scenario.gen_demand_nodes, "generate this many nodes");
  gen->add_option("--gen-edges", scenario.gen_extra_edges, "extra edges beyond the tree");
  gen->add_option("--supplies", scenario.supply_count, "number of supply nodes")
      ->required();
  gen->add_option("--assign", assign, "nearest | random | random-range");
  gen->add_option("--k", scenario.k, "supplies per node");
  gen->add_option("--k-min", scenario.k_min);
  gen->add_option("--k-max", scenario.k_max);
  gen->add_option("--p", p_const, "constant supply failure probability");
  gen->add_option("--p-range", p_range, "uniform range lo,hi");
  gen->add_option("--seed", scenario.seed);
  gen->add_option("--box", box_csv, "x0,y0,x1,y1 supply placement box");
  gen->add_option("--terminals", terminals_csv, "s,t override");
  gen->add_option("--out", out_file, "output file (default: stdout)");

  // ---- eval-path / eval-pair ---------------------------------------------
  EvalArgs eval;
  auto* eval_path = app.add_subcommand("eval-path", "path failure probability");
  eval_path->add_option("--net", eval.net_file)->required();
  eval_path->add_option("--path", eval.path_csv, "comma-separated node ids")->required();
  eval_path->add_option("--method", eval.method, "sampling | naive | oracle");
  eval_path->add_option("--epsilon", eval.epsilon);
  eval_path->add_option("--delta", eval.delta);
  eval_path->add_option("--seed", eval.seed);
  eval_path->add_option("--trials", eval.trials, "naive Monte Carlo trials");
  eval_path->add_flag("--json", eval.as_json);

  auto* eval_pair = app.add_subcommand("eval-pair", "pair failure probability");
  eval_pair->add_option("--net", eval.net_file)->required();
  eval_pair->add_option("--path", eval.path_csv)->required();
  eval_pair->add_option("--path2", eval.path2_csv)->required();
  eval_pair->add_option("--method", eval.method);
  eval_pair->add_option("--epsilon", eval.epsilon);
  eval_pair->add_option("--delta", eval.delta);
  eval_pair->add_option("--seed", eval.seed);
  eval_pair->add_option("--trials", eval.trials);
  eval_pair->add_flag("--disjoint", eval.disjoint, "require node-disjoint interiors");
  eval_pair->add_flag("--json", eval.as_json);

  // ---- indicators / bounds -----------------------------------------------
  std::string ind_path_csv, ind_path2_csv;
  double ind_p = -1.0, ind_epsilon = -1.0;
  bool ind_uniform = false;
  auto* indicators = app.add_subcommand("indicators", "reliability indicators");
  indicators->add_option("--net", net_file)->required();
  indicators->add_option("--path", ind_path_csv)->required();
  indicators->add_option("--path2", ind_path2_csv, "second path: pair indicators");
  indicators->add_option("--p", ind_p, "uniform supply failure probability");
  indicators->add_option("--epsilon", ind_epsilon, "sandwich epsilon");
  indicators->add_flag("--uniform", ind_uniform, "all nodes share one supply count");
  indicators->add_flag("--json", as_json);

  auto* bounds = app.add_subcommand("bounds", "failure probability bounds");
  bounds->add_option("--net", net_file)->required();
  bounds->add_option("--path", ind_path_csv)->required();
  bounds->add_flag("--json", as_json);

  // ---- best-path / best-pair ---------------------------------------------
  std::string method = "approx", objective = "min-weighted";
  idnet::SolveOptions solve_opts;
  auto* best_path = app.add_subcommand("best-path", "most reliable s-t path");
  best_path->add_option("--net", net_file)->required();
  best_path->add_option("--method", method, "approx | maxcap | ilp");
  best_path->add_option("--budget", solve_opts.node_budget, "branch-and-bound node cap");
  best_path->add_flag("--json", as_json);

  auto* best_pair = app.add_subcommand("best-pair", "most reliable pair of s-t paths");
  best_pair->add_option("--net", net_file)->required();
  best_pair->add_option("--method", method, "heuristic | ilp");
  best_pair->add_option("--objective", objective, "max-d | min-weighted (ilp only)");
  best_pair->add_option("--budget", solve_opts.node_budget, "branch-and-bound node cap");
  best_pair->add_flag("--json", as_json);

  // ---- oracle --------------------------------------------------------------
  idnet::OracleOptions oracle_opts;
  std::string oracle_mode = "path";
  bool oracle_disjoint = false;
  auto* oracle = app.add_subcommand("oracle", "exact exponential-time reference");
  oracle->add_option("--net", net_file)->required();
  oracle->add_option("--mode", oracle_mode,
                     "path | pair | best-path | best-pair | resilience");
  oracle->add_option("--path", ind_path_csv);
  oracle->add_option("--path2", ind_path2_csv);
  oracle->add_flag("--disjoint", oracle_disjoint);
  oracle->add_option("--cap", oracle_opts.max_supplies, "supply enumeration cap");
  oracle->add_option("--path-budget", oracle_opts.path_budget);
  oracle->add_option("--pair-budget", oracle_opts.pair_budget);
  oracle->add_flag("--json", as_json);

  // ---- export-lp -----------------------------------------------------------
  std::string model_name = "min-mbar";
  auto* export_lp_cmd = app.add_subcommand("export-lp", "write the ILP in LP format");
  export_lp_cmd->add_option("--net", net_file)->required();
  export_lp_cmd->add_option("--model", model_name, "min-mbar | max-d | min-weighted");
  export_lp_cmd->add_option("--out", out_file, "output file (default: stdout)");

  // ---- experiment -----------------------------------------------------------
  idnet::ExperimentSpec exp_spec;
  std::string methods_csv = "indicators,sampling,bounds";
  std::string exp_path_csv, csv_file;
  int exp_trials = 1;
  bool no_timing = false;
  auto* experiment = app.add_subcommand("experiment", "run methods and report");
  experiment->add_option("--net", net_file, "network file (fixed across trials)");
  experiment->add_option("--methods", methods_csv);
  experiment->add_option("--path", exp_path_csv, "evaluation subject path");
  experiment->add_option("--trials", exp_trials, "repeat with derived seeds");
  experiment->add_option("--epsilon", exp_spec.epsilon);
  experiment->add_option("--delta", exp_spec.delta);
  experiment->add_option("--seed", exp_spec.seed);
  experiment->add_option("--naive-trials", exp_spec.naive_trials);
  experiment->add_option("--csv", csv_file, "write records as CSV");
  experiment->add_option("--out", out_file, "write the JSON report to a file");
  experiment->add_flag("--no-timing", no_timing, "zero runtimes for reproducible output");
  experiment->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // 0 covers --help; everything else is usage
  }

  try {
    if (*validate) {
      auto input = idnet::load_network_input(net_file);
      auto violations = idnet::validate_network(input);
      if (as_json) {
        json doc{{"command", "validate"}, {"network", net_file}};
        doc["violations"] = json::array();
        for (const auto& v : violations)
          doc["violations"].push_back({{"element", v.element}, {"message", v.message}});
        doc["valid"] = violations.empty();
        std::cout << doc.dump(2) << "\n";
      } else if (violations.empty()) {
        std::cout << "ok\n";
      } else {
        for (const auto& v : violations)
          std::cout << "[" << v.element << "] " << v.message << "\n";
      }
      return 0;
    }

    if (*gen) {
      if (!topology_file.empty()) scenario.topology = idnet::load_network_input(topology_file);
      if (assign == "nearest") scenario.assign = idnet::AssignRule::NearestK;
      else if (assign == "random") scenario.assign = idnet::AssignRule::RandomK;
      else if (assign == "random-range") scenario.assign = idnet::AssignRule::RandomKInRange;
      else throw idnet::Error("unknown assignment rule '" + assign + "'");
      if (!p_range.empty()) {
        auto parts = split_ids(p_range);
        if (parts.size() != 2) throw idnet::Error("--p-range expects lo,hi");
        scenario.p_rule = idnet::PFailRule::UniformRange;
        scenario.p_lo = std::stod(parts[0]);
        scenario.p_hi = std::stod(parts[1]);
      } else {
        scenario.p_rule = idnet::PFailRule::Constant;
        scenario.p_const = p_const;
      }
      if (!box_csv.empty()) {
        auto parts = split_ids(box_csv);
        if (parts.size() != 4) throw idnet::Error("--box expects x0,y0,x1,y1");
        for (int i = 0; i < 4; ++i) scenario.box[i] = std::stod(parts[i]);
      }
      if (!terminals_csv.empty()) {
        auto parts = split_ids(terminals_csv);
        if (parts.size() != 2) throw idnet::Error("--terminals expects s,t");
        scenario.terminals = {parts[0], parts[1]};
      }
      auto input = idnet::gen_scenario(scenario);
      std::string text = idnet::network_to_json(input);
      if (out_file.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_file);
        if (!out) throw idnet::Error("cannot write '" + out_file + "'");
        out << text;
      }
      return 0;
    }

    if (*eval_path) return run_eval_path(eval);
    if (*eval_pair) return run_eval_pair(eval);

    if (*indicators) {
      Network net = idnet::load_network(net_file);
      Path path = parse_path(net, ind_path_csv);
      json doc{{"command", "indicators"}, {"network", net_file},
               {"path", path_json(net, path)}};
      std::string human;
      if (ind_path2_csv.empty()) {
        auto ind = idnet::indicators_single(net, path);
        doc["n_s_min"] = ind.n_s_min;
        doc["m_bar"] = ind.m_bar;
        human = "n_s_min " + std::to_string(ind.n_s_min) + ", m_bar " +
                std::to_string(ind.m_bar) + "\n";
        if (ind_p >= 0 && ind_epsilon > 0) {
          auto interval = idnet::approx_single(
              ind, ind_p, ind_epsilon,
              static_cast<int>(idnet::interior_nodes(net, path).size()), ind_uniform);
          doc["interval"] = {{"lo", interval.lo}, {"hi", interval.hi}};
          human += "sandwich interval [" + fmt(interval.lo) + ", " + fmt(interval.hi) +
                   "]\n";
        }
      } else {
        PathPair pair{path, parse_path(net, ind_path2_csv), false};
        doc["path2"] = path_json(net, pair.second);
        auto ind = idnet::indicators_pair(net, pair);
        doc["d"] = ind.d;
        doc["m_bar"] = ind.m_bar;
        human = "d " + std::to_string(ind.d) + ", m_bar " + std::to_string(ind.m_bar) +
                "\n";
        if (ind_p >= 0 && ind_epsilon > 0) {
          auto interval = idnet::approx_pair(
              ind, ind_p, ind_epsilon,
              static_cast<int>(idnet::interior_nodes(net, pair.first).size()),
              static_cast<int>(idnet::interior_nodes(net, pair.second).size()));
          doc["interval"] = {{"lo", interval.lo}, {"hi", interval.hi}};
          human += "sandwich interval [" + fmt(interval.lo) + ", " + fmt(interval.hi) +
                   "]\n";
        }
      }
      emit(doc, as_json, human);
      return 0;
    }

    if (*bounds) {
      Network net = idnet::load_network(net_file);
      Path path = parse_path(net, ind_path_csv);
      auto b = idnet::bounds_single(net, path);
      json doc{{"command", "bounds"},
               {"network", net_file},
               {"path", path_json(net, path)},
               {"lower", b.lower},
               {"upper", b.upper},
               {"ratio_cap", b.ratio_cap}};
      emit(doc, as_json,
           "lower " + fmt(b.lower) + ", upper " + fmt(b.upper) + ", ratio cap " +
               fmt(b.ratio_cap) + "\n");
      return 0;
    }

    if (*best_path) {
      Network net = idnet::load_network(net_file);
      json doc{{"command", "best-path"}, {"network", net_file}, {"method", method}};
      Path path;
      if (method == "approx") {
        auto result = idnet::approx_reliable_path(net);
        path = result.path;
        doc["surrogate_length"] = result.surrogate_length;
        doc["certain_failure"] = result.certain_failure;
      } else if (method == "maxcap") {
        auto result = idnet::max_capacity_path(net);
        path = result.path;
        if (result.bottleneck)
          doc["bottleneck"] = *result.bottleneck;
        else
          doc["bottleneck"] = "no-interior";
      } else if (method == "ilp") {
        auto sol = idnet::solve_exact(idnet::build_min_mbar(net), solve_opts);
        if (sol.status == idnet::SolveStatus::BudgetExceeded)
          throw idnet::BudgetExceededError("solver budget exceeded");
        if (!sol.path) throw idnet::InfeasibleError("no feasible path");
        path = *sol.path;
        doc["m_bar"] = sol.objective;
      } else {
        throw CLI::ValidationError("--method", "unknown method '" + method + "'");
      }
      doc["path"] = path_json(net, path);
      std::string human = "path:";
      for (const auto& id : idnet::path_to_ids(net, path)) human += " " + id;
      emit(doc, as_json, human + "\n");
      return 0;
    }

    if (*best_pair) {
      Network net = idnet::load_network(net_file);
      json doc{{"command", "best-pair"}, {"network", net_file}, {"method", method}};
      PathPair pair;
      if (method == "heuristic") {
        auto result = idnet::reliable_pair_heuristic(net);
        pair = result.pair;
        doc["total_surrogate_length"] = result.total_surrogate_length;
      } else if (method == "ilp") {
        auto model = objective == "max-d" ? idnet::build_max_d(net)
                                          : idnet::build_min_weighted(net);
        auto sol = idnet::solve_exact(model, solve_opts);
        if (sol.status == idnet::SolveStatus::BudgetExceeded)
          throw idnet::BudgetExceededError("solver budget exceeded");
        if (!sol.pair) throw idnet::InfeasibleError("no node-disjoint pair exists");
        pair = *sol.pair;
        if (sol.resilience)
          doc["resilience"] = *sol.resilience == idnet::kUnboundedResilience
                                  ? json("unbounded")
                                  : json(*sol.resilience);
        if (sol.min_union_count) doc["m_bar"] = *sol.min_union_count;
      } else {
        throw CLI::ValidationError("--method", "unknown method '" + method + "'");
      }
      doc["path"] = path_json(net, pair.first);
      doc["path2"] = path_json(net, pair.second);
      std::string human = "first: ";
      for (const auto& id : idnet::path_to_ids(net, pair.first)) human += id + " ";
      human += "\nsecond:";
      for (const auto& id : idnet::path_to_ids(net, pair.second)) human += " " + id;
      emit(doc, as_json, human + "\n");
      return 0;
    }

    if (*oracle) {
      Network net = idnet::load_network(net_file);
      json doc{{"command", "oracle"}, {"network", net_file}, {"mode", oracle_mode}};
      std::string human;
      if (oracle_mode == "path") {
        auto r = idnet::exact_path_failure(net, parse_path(net, ind_path_csv), oracle_opts);
        doc["value"] = r.probability;
        doc["enumerated_supply_count"] = r.enumerated_supply_count;
        human = "exact path failure probability: " + fmt(r.probability) + "\n";
      } else if (oracle_mode == "pair") {
        PathPair pair{parse_path(net, ind_path_csv), parse_path(net, ind_path2_csv),
                      oracle_disjoint};
        auto r = idnet::exact_pair_failure(net, pair, oracle_opts);
        doc["value"] = r.probability;
        human = "exact pair failure probability: " + fmt(r.probability) + "\n";
      } else if (oracle_mode == "best-path") {
        auto [path, r] = idnet::exact_best_path(net, oracle_opts);
        doc["path"] = path_json(net, path);
        doc["value"] = r.probability;
        human = "best path failure probability: " + fmt(r.probability) + "\n";
      } else if (oracle_mode == "best-pair") {
        auto [pair, r] = idnet::exact_best_pair(net, oracle_disjoint, oracle_opts);
        doc["path"] = path_json(net, pair.first);
        doc["path2"] = path_json(net, pair.second);
        doc["value"] = r.probability;
        human = "best pair failure probability: " + fmt(r.probability) + "\n";
      } else if (oracle_mode == "resilience") {
        PathPair pair{parse_path(net, ind_path_csv), parse_path(net, ind_path2_csv), false};
        int d = idnet::exact_resilience(net, pair, oracle_opts);
        if (d == idnet::kUnboundedResilience) {
          doc["resilience"] = "unbounded";
          human = "resilience: unbounded\n";
        } else {
          doc["resilience"] = d;
          human = "resilience: " + std::to_string(d) + "\n";
        }
      } else {
        throw CLI::ValidationError("--mode", "unknown mode '" + oracle_mode + "'");
      }
      emit(doc, as_json, human);
      return 0;
    }

    if (*export_lp_cmd) {
      Network net = idnet::load_network(net_file);
      idnet::IlpModel model;
      if (model_name == "min-mbar") model = idnet::build_min_mbar(net);
      else if (model_name == "max-d") model = idnet::build_max_d(net);
      else if (model_name == "min-weighted") model = idnet::build_min_weighted(net);
      else throw CLI::ValidationError("--model", "unknown model '" + model_name + "'");
      std::string text = idnet::export_lp(model);
      if (out_file.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_file);
        if (!out) throw idnet::Error("cannot write '" + out_file + "'");
        out << text;
      }
      return 0;
    }

    if (*experiment) {
      if (net_file.empty())
        throw CLI::ValidationError("--net", "experiment needs a network file");
      exp_spec.methods = split_ids(methods_csv);
      if (!exp_path_csv.empty()) exp_spec.path_ids = split_ids(exp_path_csv);
      exp_spec.timing = !no_timing;
      Network net = idnet::load_network(net_file);
      std::vector<Network> nets;
      for (int trial = 0; trial < exp_trials; ++trial) nets.push_back(net);
      auto report = idnet::run_experiment(nets, exp_spec);

      json doc{{"command", "experiment"},
               {"network", net_file},
               {"methods", exp_spec.methods},
               {"trials", exp_trials},
               {"seed", exp_spec.seed}};
      doc["records"] = json::array();
      for (const auto& rec : report.records) {
        json r{{"trial", rec.trial}, {"method", rec.method}};
        if (rec.error.empty()) {
          r["value"] = rec.value;
          r["runtime_ms"] = rec.runtime_ms;
          if (!rec.detail.empty()) r["detail"] = rec.detail;
        } else {
          r["error"] = rec.error;
        }
        doc["records"].push_back(std::move(r));
      }
      doc["aggregates"] = json::object();
      for (const auto& [name, agg] : report.aggregates)
        doc["aggregates"][name] = {{"mean", agg.mean},
                                   {"min", agg.min},
                                   {"max", agg.max},
                                   {"count", agg.count}};

      if (!csv_file.empty()) {
        std::ofstream csv(csv_file);
        if (!csv) throw idnet::Error("cannot write '" + csv_file + "'");
        csv << "trial,method,value,runtime_ms,error\n";
        for (const auto& rec : report.records)
          csv << rec.trial << "," << rec.method << "," << fmt(rec.value) << ","
              << fmt(rec.runtime_ms) << "," << rec.error << "\n";
      }
      std::string text = as_json ? doc.dump(2) + "\n" : "";
      if (!as_json) {
        for (const auto& rec : report.records) {
          text += rec.method;
          if (rec.error.empty())
            text += ": " + fmt(rec.value) + " (" + fmt(rec.runtime_ms) + " ms)\n";
          else
            text += ": error: " + rec.error + "\n";
        }
      }
      if (out_file.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_file);
        if (!out) throw idnet::Error("cannot write '" + out_file + "'");
        out << text;
      }
      return 0;
    }
  } catch (const idnet::BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const idnet::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
