#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "idnet/model.hpp"

namespace idnet {

enum class ModelKind { MinMbar, MaxD, MinWeighted };
enum class VarType { Binary, Integer };
enum class RowSense { LessEq, GreaterEq, Equal };

struct IlpVariable {
  std::string name;
  VarType type = VarType::Binary;
  double lo = 0.0;
  double hi = 1.0;
};

struct IlpTerm {
  int var;
  double coeff;
};

struct IlpRow {
  std::string name;
  std::vector<IlpTerm> terms;
  RowSense sense = RowSense::LessEq;
  double rhs = 0.0;
};

/// A flow-based integer program over a network, plus the metadata needed to
/// map a solution back onto paths.
struct IlpModel {
  ModelKind kind = ModelKind::MinMbar;
  bool maximize = false;
  std::vector<IlpVariable> vars;
  std::vector<IlpRow> rows;
  std::vector<IlpTerm> objective;
  // Exact decimal objective coefficients, parallel to `objective`; used by
  // the LP export when doubles cannot carry the weights exactly.
  std::vector<std::string> objective_exact;
  double big_m = 0.0;
  std::map<int, std::string> weights;  // union cardinality -> exact weight

  const Network* net = nullptr;
  int path_systems = 1;

  struct ArcMeta {
    int k;
    int from;
    int to;
  };
  std::unordered_map<int, ArcMeta> arc_meta;                // x var -> arc
  std::unordered_map<int, std::pair<int, int>> node_meta;   // b var -> (k, node)
  std::unordered_map<int, std::vector<int>> set_meta;       // h var -> supply set
  int d_var = -1;
  int d_upper = 0;                 // d == d_upper encodes unbounded resilience
  std::optional<int> bottleneck_k; // MinMbar: capacity used for pruning
};

enum class SolveStatus { Optimal, Infeasible, BudgetExceeded };

struct IlpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::optional<Path> path;
  std::optional<PathPair> pair;
  std::vector<double> assignment;
  // MaxD / MinWeighted: resilience of the extracted pair
  // (kUnboundedResilience when a path has no failable node).
  std::optional<int> resilience;
  // MinWeighted: number of distinct minimal supply unions of the pair.
  std::optional<std::int64_t> min_union_count;
  std::uint64_t nodes_explored = 0;
};

/// Program minimizing the count of distinct bottleneck-size supply sets on
/// one s-t path, after pruning nodes below the maximum achievable
/// bottleneck capacity.
IlpModel build_min_mbar(const Network& net);

/// Program maximizing the resilience level d of a node-disjoint path pair.
IlpModel build_max_d(const Network& net);

/// Weighted program preferring higher d, then fewer minimal supply unions.
IlpModel build_min_weighted(const Network& net);

struct SolveOptions {
  std::uint64_t node_budget = 10'000'000;
};

/// Deterministic depth-first branch and bound over the binary variables.
/// MinWeighted models are solved lexicographically: maximize d first, then
/// minimize the number of size-(d+1) unions at fixed d.
IlpSolution solve_exact(const IlpModel& model, const SolveOptions& opts = {});

/// Decomposes a feasible assignment's flow systems into simple paths
/// (cycles are excised) and re-verifies the objective they induce.
std::variant<Path, PathPair> extract_route(const IlpModel& model,
                                           std::span<const double> assignment);

/// LP-format text; deterministic ordering, byte-stable per model.
std::string export_lp(const IlpModel& model);

}  // namespace idnet
