#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idnet/model.hpp"
#include "idnet/oracle.hpp"

namespace idnet {

enum class AssignRule { NearestK, RandomK, RandomKInRange };
enum class PFailRule { Constant, UniformRange };

/// Knobs for generating a supplied network: a demand topology (given or
/// generated), uniformly placed supply points, an assignment rule and a
/// failure-probability rule. The same seed always yields the same network.
struct Scenario {
  std::optional<NetworkInput> topology;  // demand side reused; supplies replaced
  int gen_demand_nodes = 0;              // used when no topology is given
  int gen_extra_edges = 0;               // edges beyond the random spanning tree

  int supply_count = 0;
  AssignRule assign = AssignRule::NearestK;
  int k = 1;                  // NearestK / RandomK
  int k_min = 1, k_max = 1;   // RandomKInRange
  PFailRule p_rule = PFailRule::Constant;
  double p_const = 0.01;
  double p_lo = 0.0, p_hi = 0.0;

  std::uint64_t seed = 0;
  // x0, y0, x1, y1; all-zero means: use the demand coordinate bounding box.
  std::array<double, 4> box = {0.0, 0.0, 0.0, 0.0};
  std::optional<std::pair<std::string, std::string>> terminals;
};

NetworkInput gen_scenario(const Scenario& sc);

struct ExperimentSpec {
  std::vector<std::string> methods;
  std::vector<std::string> path_ids;  // evaluation subject; empty: use approx path
  double epsilon = 0.05;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::uint64_t naive_trials = 100000;
  bool timing = true;
  OracleOptions oracle;
};

struct ExperimentRecord {
  int trial = 0;
  std::string method;
  double value = 0.0;
  double runtime_ms = 0.0;
  std::string detail;  // route or diagnostics, when applicable
  std::string error;   // nonempty: this method failed, value is meaningless
};

struct MethodAggregate {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

struct ExperimentReport {
  std::vector<ExperimentRecord> records;
  std::map<std::string, MethodAggregate> aggregates;
};

/// Runs the requested methods on each network (one trial per network).
/// Method failures are recorded and do not stop the run.
ExperimentReport run_experiment(std::span<const Network> nets, const ExperimentSpec& spec);

/// Recomputes aggregates from the records (also used to verify reports).
std::map<std::string, MethodAggregate> aggregate_records(
    std::span<const ExperimentRecord> records);

}  // namespace idnet
