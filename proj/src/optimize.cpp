#include "idnet/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <set>
#include <sstream>

#include "idnet/errors.hpp"
#include "idnet/oracle.hpp"
#include "idnet/routing.hpp"

namespace idnet {

namespace {

constexpr double kEps = 1e-6;

std::string sanitize(const std::string& id) {
  std::string out;
  out.reserve(id.size());
  for (char c : id)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

std::vector<int> union_of(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// base^exp as a decimal string; the weighted objective needs exact values
// that overflow 64-bit integers.
std::string decimal_pow(std::uint64_t base, int exp) {
  std::string result = "1";
  for (int e = 0; e < exp; ++e) {
    std::string next;
    unsigned __int128 carry = 0;
    for (auto it = result.rbegin(); it != result.rend(); ++it) {
      unsigned __int128 cur = carry + static_cast<unsigned __int128>(*it - '0') * base;
      next.push_back(static_cast<char>('0' + static_cast<int>(cur % 10)));
      carry = cur / 10;
    }
    while (carry) {
      next.push_back(static_cast<char>('0' + static_cast<int>(carry % 10)));
      carry /= 10;
    }
    std::reverse(next.begin(), next.end());
    result = std::move(next);
  }
  return result;
}

int add_var(IlpModel& m, std::string name, VarType type, double lo, double hi) {
  m.vars.push_back({std::move(name), type, lo, hi});
  return static_cast<int>(m.vars.size()) - 1;
}

struct FlowVars {
  // (k, from, to) -> var; arc order follows the network edge list.
  std::map<std::tuple<int, int, int>, int> by_arc;
};

// One x variable per directed arc of each flow system, over the edges whose
// endpoints are both allowed.
FlowVars add_flow_system(IlpModel& m, const Network& net, int k,
                         const std::vector<bool>& allowed) {
  FlowVars vars;
  for (const auto& [a, b] : net.edges()) {
    if (!allowed[a] || !allowed[b]) continue;
    for (auto [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
      int var = add_var(m,
                        "x_" + std::to_string(k) + "_" + sanitize(net.demand(from).id) +
                            "_" + sanitize(net.demand(to).id),
                        VarType::Binary, 0, 1);
      m.arc_meta[var] = {k, from, to};
      vars.by_arc[{k, from, to}] = var;
    }
  }
  return vars;
}

void add_flow_rows(IlpModel& m, const Network& net, int k, const FlowVars& vars,
                   const std::vector<bool>& allowed) {
  int s = net.source(), t = net.target();
  for (int v = 0; v < net.demand_count(); ++v) {
    if (!allowed[v]) continue;
    IlpRow row;
    row.name = "flow_" + std::to_string(k) + "_" + sanitize(net.demand(v).id);
    row.sense = RowSense::Equal;
    row.rhs = v == s ? 1.0 : (v == t ? -1.0 : 0.0);
    for (const auto& [key, var] : vars.by_arc) {
      auto [kk, from, to] = key;
      if (from == v) row.terms.push_back({var, 1.0});
      if (to == v) row.terms.push_back({var, -1.0});
    }
    m.rows.push_back(std::move(row));
  }
}

// Incident-arc sum for node v in system k: sum of x over out and in arcs.
std::vector<IlpTerm> incident_terms(const FlowVars& vars, int k, int v) {
  std::vector<IlpTerm> terms;
  for (const auto& [key, var] : vars.by_arc) {
    auto [kk, from, to] = key;
    if (kk != k) continue;
    if (from == v || to == v) terms.push_back({var, 1.0});
  }
  return terms;
}

void check_connected(const Network& net, const std::vector<bool>& allowed) {
  std::vector<bool> seen(net.demand_count(), false);
  std::queue<int> queue;
  queue.push(net.source());
  seen[net.source()] = true;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop();
    for (int w : net.neighbors(x)) {
      if (!allowed[w] || seen[w]) continue;
      seen[w] = true;
      queue.push(w);
    }
  }
  if (!seen[net.target()])
    throw InfeasibleError("terminals are disconnected in the pruned graph");
}

int max_union_size(const Network& net) {
  int best = 0;
  for (int i = 0; i < net.demand_count(); ++i) {
    if (net.is_terminal(i)) continue;
    for (int j = 0; j < net.demand_count(); ++j) {
      if (net.is_terminal(j)) continue;
      best = std::max(
          best, static_cast<int>(union_of(net.demand(i).supplies, net.demand(j).supplies)
                                     .size()));
    }
  }
  return best;
}

}  // namespace

IlpModel build_min_mbar(const Network& net) {
  auto cap = max_capacity_path(net);

  IlpModel m;
  m.kind = ModelKind::MinMbar;
  m.maximize = false;
  m.net = &net;
  m.path_systems = 1;
  m.bottleneck_k = cap.bottleneck;

  const int n = net.demand_count();
  std::vector<bool> allowed(n, false);
  for (int v = 0; v < n; ++v) {
    if (net.is_terminal(v)) {
      allowed[v] = true;
    } else if (cap.bottleneck) {
      allowed[v] = static_cast<int>(net.demand(v).supplies.size()) >= *cap.bottleneck;
    }
  }
  check_connected(net, allowed);

  FlowVars vars = add_flow_system(m, net, 1, allowed);
  add_flow_rows(m, net, 1, vars, allowed);

  if (cap.bottleneck) {
    // Distinct supply sets of the exactly-k nodes share one h variable.
    std::vector<std::vector<int>> sets;
    for (int v = 0; v < n; ++v) {
      if (!allowed[v] || net.is_terminal(v)) continue;
      if (static_cast<int>(net.demand(v).supplies.size()) != *cap.bottleneck) continue;
      sets.push_back(net.demand(v).supplies);
    }
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    std::map<std::vector<int>, int> h_of;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      int var = add_var(m, "h_" + std::to_string(i), VarType::Binary, 0, 1);
      m.set_meta[var] = sets[i];
      h_of[sets[i]] = var;
      m.objective.push_back({var, 1.0});
    }
    for (int v = 0; v < n; ++v) {
      if (!allowed[v] || net.is_terminal(v)) continue;
      if (static_cast<int>(net.demand(v).supplies.size()) != *cap.bottleneck) continue;
      IlpRow row;
      row.name = "link_1_" + sanitize(net.demand(v).id);
      row.sense = RowSense::LessEq;
      row.rhs = 0.0;
      row.terms = incident_terms(vars, 1, v);
      row.terms.push_back({h_of.at(net.demand(v).supplies), -2.0});
      m.rows.push_back(std::move(row));
    }
  }
  return m;
}

namespace {

struct PairSkeleton {
  FlowVars vars1, vars2;
  std::vector<int> b1, b2;  // node var per demand index; -1 for none
};

PairSkeleton add_pair_skeleton(IlpModel& m, const Network& net) {
  const int n = net.demand_count();
  std::vector<bool> allowed(n, true);
  PairSkeleton sk;
  sk.vars1 = add_flow_system(m, net, 1, allowed);
  sk.vars2 = add_flow_system(m, net, 2, allowed);
  add_flow_rows(m, net, 1, sk.vars1, allowed);
  add_flow_rows(m, net, 2, sk.vars2, allowed);

  sk.b1.assign(n, -1);
  sk.b2.assign(n, -1);
  for (int k = 1; k <= 2; ++k) {
    auto& b = k == 1 ? sk.b1 : sk.b2;
    const auto& vars = k == 1 ? sk.vars1 : sk.vars2;
    for (int v = 0; v < n; ++v) {
      b[v] = add_var(m, "b_" + std::to_string(k) + "_" + sanitize(net.demand(v).id),
                     VarType::Binary, 0, 1);
      m.node_meta[b[v]] = {k, v};
      IlpRow row;
      row.name = "link_" + std::to_string(k) + "_" + sanitize(net.demand(v).id);
      row.sense = RowSense::LessEq;
      row.rhs = 0.0;
      row.terms = incident_terms(vars, k, v);
      row.terms.push_back({b[v], -2.0});
      m.rows.push_back(std::move(row));
    }
  }
  for (int v = 0; v < n; ++v) {
    if (net.is_terminal(v)) continue;
    IlpRow row;
    row.name = "disj_" + sanitize(net.demand(v).id);
    row.sense = RowSense::LessEq;
    row.rhs = 1.0;
    row.terms = {{sk.b1[v], 1.0}, {sk.b2[v], 1.0}};
    m.rows.push_back(std::move(row));
  }
  return sk;
}

}  // namespace

IlpModel build_max_d(const Network& net) {
  IlpModel m;
  m.kind = ModelKind::MaxD;
  m.maximize = true;
  m.net = &net;
  m.path_systems = 2;

  PairSkeleton sk = add_pair_skeleton(m, net);

  const int n = net.demand_count();
  m.d_upper = max_union_size(net);
  m.big_m = 2.0 * m.d_upper + 1.0;
  m.d_var = add_var(m, "d", VarType::Integer, 0, m.d_upper);
  m.objective.push_back({m.d_var, 1.0});

  // d + 1 <= |S_i u S_j| + M (2 - b_i^1 - b_j^2)
  for (int i = 0; i < n; ++i) {
    if (net.is_terminal(i)) continue;
    for (int j = 0; j < n; ++j) {
      if (net.is_terminal(j)) continue;
      auto u = union_of(net.demand(i).supplies, net.demand(j).supplies);
      IlpRow row;
      row.name = "res_" + sanitize(net.demand(i).id) + "_" + sanitize(net.demand(j).id);
      row.sense = RowSense::LessEq;
      row.rhs = static_cast<double>(u.size()) - 1.0 + 2.0 * m.big_m;
      row.terms = {{m.d_var, 1.0}, {sk.b1[i], m.big_m}, {sk.b2[j], m.big_m}};
      m.rows.push_back(std::move(row));
    }
  }
  return m;
}

IlpModel build_min_weighted(const Network& net) {
  IlpModel m;
  m.kind = ModelKind::MinWeighted;
  m.maximize = false;
  m.net = &net;
  m.path_systems = 2;

  PairSkeleton sk = add_pair_skeleton(m, net);

  const int n = net.demand_count();
  const int max_union = max_union_size(net);
  m.d_upper = max_union;

  // w(l) = B^{L-l} with B >= |V|^2 / 2 keeps every cardinality level
  // dominant over all smaller-weight levels combined.
  const auto base = static_cast<std::uint64_t>(
      std::max(2.0, std::ceil(static_cast<double>(n) * n / 2.0)));
  for (int l = 1; l <= max_union; ++l)
    m.weights[l] = decimal_pow(base, max_union - l);

  std::map<std::vector<int>, std::vector<std::pair<int, int>>> pairs_by_union;
  for (int i = 0; i < n; ++i) {
    if (net.is_terminal(i)) continue;
    for (int j = 0; j < n; ++j) {
      if (net.is_terminal(j)) continue;
      pairs_by_union[union_of(net.demand(i).supplies, net.demand(j).supplies)]
          .push_back({i, j});
    }
  }
  int set_id = 0;
  for (const auto& [u, pairs] : pairs_by_union) {
    int var = add_var(m, "h_" + std::to_string(set_id++), VarType::Binary, 0, 1);
    m.set_meta[var] = u;
    double w_dbl = std::pow(static_cast<double>(base),
                            static_cast<double>(max_union - static_cast<int>(u.size())));
    m.objective.push_back({var, w_dbl});
    m.objective_exact.push_back(m.weights.at(static_cast<int>(u.size())));
    for (auto [i, j] : pairs) {
      IlpRow row;
      row.name = "hdef_" + sanitize(net.demand(i).id) + "_" + sanitize(net.demand(j).id);
      row.sense = RowSense::LessEq;
      row.rhs = 1.0;
      row.terms = {{sk.b1[i], 1.0}, {sk.b2[j], 1.0}, {var, -1.0}};
      m.rows.push_back(std::move(row));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Branch and bound
// ---------------------------------------------------------------------------

namespace {

struct Domain {
  std::vector<std::int8_t> bin;  // -1 unset, else 0/1 (entry unused for d)
  int dlo = 0, dhi = 0;
};

class Solver {
 public:
  Solver(const IlpModel& model, std::uint64_t budget) : model_(model), budget_(budget) {
    rows_of_var_.resize(model_.vars.size());
    for (std::size_t r = 0; r < model_.rows.size(); ++r)
      for (const auto& term : model_.rows[r].terms)
        rows_of_var_[term.var].push_back(static_cast<int>(r));
    queued_.assign(model_.rows.size(), 0);
  }

  IlpSolution run() {
    Domain dom;
    dom.bin.assign(model_.vars.size(), -1);
    if (model_.d_var >= 0) {
      dom.dlo = static_cast<int>(model_.vars[model_.d_var].lo);
      dom.dhi = static_cast<int>(model_.vars[model_.d_var].hi);
    }
    dfs(dom, -1);
    IlpSolution sol;
    sol.nodes_explored = nodes_;
    if (budget_hit_)
      sol.status = SolveStatus::BudgetExceeded;
    else
      sol.status = have_incumbent_ ? SolveStatus::Optimal : SolveStatus::Infeasible;
    if (have_incumbent_) {
      sol.objective = best_obj_;
      sol.assignment = best_assign_;
    }
    return sol;
  }

 private:
  void enqueue_rows_of(int var) {
    for (int r : rows_of_var_[var]) {
      if (queued_[r]) continue;
      queued_[r] = 1;
      queue_.push_back(r);
    }
  }

  // Worklist bound propagation to the unique fixpoint. Domains only ever
  // shrink, so seeding with the rows of the just-branched variable (or all
  // rows at the root) revisits exactly what can still tighten.
  bool propagate(Domain& dom, int seed_var) {
    queue_.clear();
    if (seed_var < 0) {
      for (std::size_t r = 0; r < model_.rows.size(); ++r) {
        queue_.push_back(static_cast<int>(r));
        queued_[r] = 1;
      }
    } else {
      enqueue_rows_of(seed_var);
    }
    bool feasible = true;
    while (!queue_.empty()) {
      int r = queue_.back();
      queue_.pop_back();
      queued_[r] = 0;
      if (!revise_row(dom, model_.rows[r])) {
        feasible = false;
        break;
      }
    }
    for (int r : queue_) queued_[r] = 0;
    queue_.clear();
    return feasible;
  }

  bool revise_row(Domain& dom, const IlpRow& row) {
    double lo = 0.0, hi = 0.0;
    for (const auto& [var, c] : row.terms) {
      if (var == model_.d_var) {
        lo += c > 0 ? c * dom.dlo : c * dom.dhi;
        hi += c > 0 ? c * dom.dhi : c * dom.dlo;
      } else if (dom.bin[var] < 0) {
        lo += std::min(c, 0.0);
        hi += std::max(c, 0.0);
      } else {
        lo += c * dom.bin[var];
        hi += c * dom.bin[var];
      }
    }
    bool upper = row.sense != RowSense::GreaterEq;  // LessEq or Equal
    bool lower = row.sense != RowSense::LessEq;     // GreaterEq or Equal
    if (upper && lo > row.rhs + kEps) return false;
    if (lower && hi < row.rhs - kEps) return false;
    for (const auto& [var, c] : row.terms) {
      if (var == model_.d_var) {
        if (upper && c > 0) {
          double other = lo - c * dom.dlo;
          int cap = static_cast<int>(std::floor((row.rhs - other) / c + kEps));
          if (cap < dom.dhi) { dom.dhi = cap; enqueue_rows_of(var); }
        }
        if (upper && c < 0) {
          double other = lo - c * dom.dhi;
          int floor_d = static_cast<int>(std::ceil((row.rhs - other) / c - kEps));
          if (floor_d > dom.dlo) { dom.dlo = floor_d; enqueue_rows_of(var); }
        }
        if (lower && c > 0) {
          double other = hi - c * dom.dhi;
          int floor_d = static_cast<int>(std::ceil((row.rhs - other) / c - kEps));
          if (floor_d > dom.dlo) { dom.dlo = floor_d; enqueue_rows_of(var); }
        }
        if (lower && c < 0) {
          double other = hi - c * dom.dlo;
          int cap = static_cast<int>(std::floor((row.rhs - other) / c + kEps));
          if (cap < dom.dhi) { dom.dhi = cap; enqueue_rows_of(var); }
        }
        if (dom.dlo > dom.dhi) return false;
        continue;
      }
      if (dom.bin[var] >= 0) continue;
      if (upper) {
        if (c > 0 && lo + c > row.rhs + kEps) {
          dom.bin[var] = 0;
          enqueue_rows_of(var);
        } else if (c < 0 && lo - c > row.rhs + kEps) {
          dom.bin[var] = 1;
          enqueue_rows_of(var);
        }
      }
      if (dom.bin[var] >= 0) continue;
      if (lower) {
        if (c > 0 && hi - c < row.rhs - kEps) {
          dom.bin[var] = 1;
          enqueue_rows_of(var);
        } else if (c < 0 && hi + c < row.rhs - kEps) {
          dom.bin[var] = 0;
          enqueue_rows_of(var);
        }
      }
    }
    return true;
  }

  double objective_bound(const Domain& dom) const {
    double bound = 0.0;
    for (const auto& [var, c] : model_.objective) {
      if (var == model_.d_var) {
        bound += model_.maximize ? (c > 0 ? c * dom.dhi : c * dom.dlo)
                                 : (c > 0 ? c * dom.dlo : c * dom.dhi);
      } else if (dom.bin[var] < 0) {
        bound += model_.maximize ? std::max(c, 0.0) : std::min(c, 0.0);
      } else {
        bound += c * dom.bin[var];
      }
    }
    return bound;
  }

  void dfs(Domain dom, int seed_var) {
    if (budget_hit_) return;
    if (++nodes_ > budget_) {
      budget_hit_ = true;
      return;
    }
    if (!propagate(dom, seed_var)) return;
    if (have_incumbent_) {
      double bound = objective_bound(dom);
      if (model_.maximize ? bound <= best_obj_ + kEps : bound >= best_obj_ - kEps)
        return;
    }
    int branch = -1;
    for (std::size_t i = 0; i < model_.vars.size(); ++i) {
      if (static_cast<int>(i) == model_.d_var) continue;
      if (dom.bin[i] < 0) {
        branch = static_cast<int>(i);
        break;
      }
    }
    if (branch < 0) {
      // Leaf: pick the objective-optimal endpoint of the d interval.
      int d_choice = dom.dlo;
      double d_coeff = 0.0;
      for (const auto& [var, c] : model_.objective)
        if (var == model_.d_var) d_coeff = c;
      if (model_.d_var >= 0 && (model_.maximize ? d_coeff > 0 : d_coeff < 0))
        d_choice = dom.dhi;
      double obj = 0.0;
      for (const auto& [var, c] : model_.objective)
        obj += var == model_.d_var ? c * d_choice : c * dom.bin[var];
      if (!have_incumbent_ ||
          (model_.maximize ? obj > best_obj_ + kEps : obj < best_obj_ - kEps)) {
        have_incumbent_ = true;
        best_obj_ = obj;
        best_assign_.assign(model_.vars.size(), 0.0);
        for (std::size_t i = 0; i < model_.vars.size(); ++i)
          if (static_cast<int>(i) != model_.d_var) best_assign_[i] = dom.bin[i];
        if (model_.d_var >= 0) best_assign_[model_.d_var] = d_choice;
      }
      return;
    }
    Domain zero = dom;
    zero.bin[branch] = 0;
    dfs(std::move(zero), branch);
    dom.bin[branch] = 1;
    dfs(std::move(dom), branch);
  }

  const IlpModel& model_;
  std::uint64_t budget_;
  std::vector<std::vector<int>> rows_of_var_;
  std::vector<int> queue_;
  std::vector<char> queued_;
  std::uint64_t nodes_ = 0;
  bool budget_hit_ = false;
  bool have_incumbent_ = false;
  double best_obj_ = 0.0;
  std::vector<double> best_assign_;
};

// Resilience of a pair by the union formula; kUnboundedResilience when one
// interior is empty.
int formula_resilience(const Network& net, const PathPair& pair) {
  auto first = interior_nodes(net, pair.first);
  auto second = interior_nodes(net, pair.second);
  if (first.empty() || second.empty()) return kUnboundedResilience;
  std::size_t best = SIZE_MAX;
  for (int i : first)
    for (int j : second)
      best = std::min(best, union_of(net.demand(i).supplies, net.demand(j).supplies).size());
  return static_cast<int>(best) - 1;
}

std::int64_t count_minimal_unions(const Network& net, const PathPair& pair,
                                  std::size_t size) {
  auto first = interior_nodes(net, pair.first);
  auto second = interior_nodes(net, pair.second);
  std::set<std::vector<int>> unions;
  for (int i : first)
    for (int j : second) {
      auto u = union_of(net.demand(i).supplies, net.demand(j).supplies);
      if (u.size() == size) unions.insert(std::move(u));
    }
  return static_cast<std::int64_t>(unions.size());
}

// Stage 2 of the lexicographic weighted solve: resilience pinned at d_star,
// minimize the number of distinct size-(d_star + 1) unions.
IlpModel build_weighted_stage2(const Network& net, int d_star) {
  IlpModel m;
  m.kind = ModelKind::MinWeighted;
  m.maximize = false;
  m.net = &net;
  m.path_systems = 2;
  m.d_upper = d_star;

  PairSkeleton sk = add_pair_skeleton(m, net);
  const int n = net.demand_count();

  std::map<std::vector<int>, int> h_of;
  for (int i = 0; i < n; ++i) {
    if (net.is_terminal(i)) continue;
    for (int j = 0; j < n; ++j) {
      if (net.is_terminal(j)) continue;
      auto u = union_of(net.demand(i).supplies, net.demand(j).supplies);
      if (d_star != kUnboundedResilience &&
          static_cast<int>(u.size()) == d_star + 1) {
        auto [it, inserted] = h_of.try_emplace(u, -1);
        if (inserted) {
          it->second = add_var(m, "h_" + std::to_string(h_of.size() - 1),
                               VarType::Binary, 0, 1);
          m.set_meta[it->second] = u;
          m.objective.push_back({it->second, 1.0});
        }
        IlpRow row;
        row.name = "hdef_" + sanitize(net.demand(i).id) + "_" +
                   sanitize(net.demand(j).id);
        row.sense = RowSense::LessEq;
        row.rhs = 1.0;
        row.terms = {{sk.b1[i], 1.0}, {sk.b2[j], 1.0}, {it->second, -1.0}};
        m.rows.push_back(std::move(row));
      } else if (d_star == kUnboundedResilience ||
                 static_cast<int>(u.size()) <= d_star) {
        // This node pair would cap the resilience below d_star; forbid it.
        IlpRow row;
        row.name = "forbid_" + sanitize(net.demand(i).id) + "_" +
                   sanitize(net.demand(j).id);
        row.sense = RowSense::LessEq;
        row.rhs = 1.0;
        row.terms = {{sk.b1[i], 1.0}, {sk.b2[j], 1.0}};
        m.rows.push_back(std::move(row));
      }
    }
  }
  return m;
}

}  // namespace

std::variant<Path, PathPair> extract_route(const IlpModel& model,
                                           std::span<const double> assignment) {
  const Network& net = *model.net;
  const int s = net.source();
  const int t = net.target();

  auto walk_system = [&](int k) {
    std::map<int, std::vector<int>> next;
    for (const auto& [var, arc] : model.arc_meta) {
      if (arc.k != k || assignment[var] < 0.5) continue;
      next[arc.from].push_back(arc.to);
    }
    for (auto& [from, tos] : next)
      std::sort(tos.begin(), tos.end(),
                [&](int a, int b) { return net.id_rank(a) < net.id_rank(b); });
    Path path;
    path.nodes.push_back(s);
    std::map<int, std::size_t> pos{{s, 0}};
    int cur = s;
    while (cur != t) {
      auto it = next.find(cur);
      if (it == next.end() || it->second.empty())
        throw Error("inconsistent assignment: flow dead-ends at '" +
                    net.demand(cur).id + "'");
      int w = it->second.front();
      it->second.erase(it->second.begin());
      auto seen = pos.find(w);
      if (seen != pos.end()) {
        // Flow cycle returning to the walk; drop the loop.
        for (std::size_t i = seen->second + 1; i < path.nodes.size(); ++i)
          pos.erase(path.nodes[i]);
        path.nodes.resize(seen->second + 1);
        cur = w;
      } else {
        path.nodes.push_back(w);
        pos[w] = path.nodes.size() - 1;
        cur = w;
      }
    }
    return path;
  };

  double solver_obj = 0.0;
  for (std::size_t i = 0; i < model.objective.size(); ++i)
    solver_obj += model.objective[i].coeff * assignment[model.objective[i].var];

  if (model.path_systems == 1) {
    Path path = walk_system(1);
    auto violations = check_path(net, path);
    if (!violations.empty())
      throw Error("inconsistent assignment: [" + violations.front().element + "] " +
                  violations.front().message);
    if (model.kind == ModelKind::MinMbar && model.bottleneck_k) {
      std::set<std::vector<int>> sets;
      for (int v : interior_nodes(net, path))
        if (static_cast<int>(net.demand(v).supplies.size()) == *model.bottleneck_k)
          sets.insert(net.demand(v).supplies);
      if (static_cast<double>(sets.size()) > solver_obj + kEps)
        throw Error("inconsistent assignment: extracted path exceeds the objective");
    }
    return path;
  }

  PathPair pair{walk_system(1), walk_system(2), true};
  auto violations = check_pair(net, pair);
  if (!violations.empty())
    throw Error("inconsistent assignment: [" + violations.front().element + "] " +
                violations.front().message);
  if (model.kind == ModelKind::MaxD) {
    int r = formula_resilience(net, pair);
    int d = static_cast<int>(std::lround(assignment[model.d_var]));
    if (r != kUnboundedResilience && r < d)
      throw Error("inconsistent assignment: extracted pair falls short of d");
  } else if (model.kind == ModelKind::MinWeighted) {
    if (model.weights.empty()) {
      // Lexicographic stage 2: objective counts minimal unions.
      if (model.d_upper != kUnboundedResilience &&
          static_cast<double>(count_minimal_unions(
              net, pair, static_cast<std::size_t>(model.d_upper) + 1)) >
              solver_obj + kEps)
        throw Error("inconsistent assignment: extracted pair exceeds the objective");
    } else {
      double recomputed = 0.0;
      auto first = interior_nodes(net, pair.first);
      auto second = interior_nodes(net, pair.second);
      std::set<std::vector<int>> unions;
      for (int i : first)
        for (int j : second)
          unions.insert(union_of(net.demand(i).supplies, net.demand(j).supplies));
      const double base = std::max(
          2.0, std::ceil(static_cast<double>(net.demand_count()) * net.demand_count() / 2.0));
      for (const auto& u : unions)
        recomputed += std::pow(base, model.d_upper - static_cast<int>(u.size()));
      if (recomputed > solver_obj * (1.0 + 1e-9) + kEps)
        throw Error("inconsistent assignment: extracted pair exceeds the objective");
    }
  }
  return pair;
}

namespace {

IlpSolution solve_core(const IlpModel& model, std::uint64_t budget) {
  Solver solver(model, budget);
  IlpSolution sol = solver.run();
  if (!sol.assignment.empty()) {
    auto route = extract_route(model, sol.assignment);
    if (std::holds_alternative<Path>(route))
      sol.path = std::get<Path>(route);
    else
      sol.pair = std::get<PathPair>(route);
    if (model.kind == ModelKind::MaxD && model.d_var >= 0) {
      int d = static_cast<int>(std::lround(sol.assignment[model.d_var]));
      sol.resilience = d >= model.d_upper ? kUnboundedResilience : d;
    }
  }
  return sol;
}

}  // namespace

IlpSolution solve_exact(const IlpModel& model, const SolveOptions& opts) {
  if (!model.net) throw Error("model carries no network");
  if (model.kind != ModelKind::MinWeighted) return solve_core(model, opts.node_budget);

  // Lexicographic solve: maximize d, then minimize the union count at d.
  const Network& net = *model.net;
  IlpModel stage1 = build_max_d(net);
  IlpSolution first = solve_core(stage1, opts.node_budget);
  if (first.status != SolveStatus::Optimal) return first;
  int d_star = *first.resilience;

  IlpModel stage2 = build_weighted_stage2(net, d_star);
  std::uint64_t remaining = opts.node_budget > first.nodes_explored
                                ? opts.node_budget - first.nodes_explored
                                : 1;
  IlpSolution sol = solve_core(stage2, remaining);
  sol.nodes_explored += first.nodes_explored;
  if (sol.status == SolveStatus::Optimal && sol.pair) {
    sol.resilience = d_star;
    sol.min_union_count = static_cast<std::int64_t>(std::llround(sol.objective));
  }
  return sol;
}

// ---------------------------------------------------------------------------
// LP export
// ---------------------------------------------------------------------------

namespace {

std::string fmt_coeff(double x) {
  if (x == std::floor(x) && std::abs(x) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(x));
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void append_terms(std::ostringstream& out, const IlpModel& m,
                  const std::vector<IlpTerm>& terms,
                  const std::vector<std::string>* exact) {
  bool first = true;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    double c = terms[i].coeff;
    std::string mag = exact && i < exact->size() && !(*exact)[i].empty()
                          ? (*exact)[i]
                          : fmt_coeff(std::abs(c));
    out << (first ? (c < 0 ? " -" : "") : (c < 0 ? " -" : " +"));
    if (mag != "1") out << " " << mag;
    out << " " << m.vars[terms[i].var].name;
    first = false;
  }
}

}  // namespace

std::string export_lp(const IlpModel& model) {
  std::ostringstream out;
  out << (model.maximize ? "Maximize" : "Minimize") << "\n obj:";
  append_terms(out, model, model.objective,
               model.objective_exact.empty() ? nullptr : &model.objective_exact);
  out << "\nSubject To\n";
  for (const auto& row : model.rows) {
    out << " " << row.name << ":";
    append_terms(out, model, row.terms, nullptr);
    switch (row.sense) {
      case RowSense::LessEq: out << " <= "; break;
      case RowSense::GreaterEq: out << " >= "; break;
      case RowSense::Equal: out << " = "; break;
    }
    out << fmt_coeff(row.rhs) << "\n";
  }
  bool have_bounds = false;
  for (const auto& var : model.vars)
    if (var.type == VarType::Integer) have_bounds = true;
  if (have_bounds) {
    out << "Bounds\n";
    for (const auto& var : model.vars)
      if (var.type == VarType::Integer)
        out << " " << fmt_coeff(var.lo) << " <= " << var.name << " <= "
            << fmt_coeff(var.hi) << "\n";
    out << "General\n";
    for (const auto& var : model.vars)
      if (var.type == VarType::Integer) out << " " << var.name << "\n";
  }
  bool have_binary = false;
  for (const auto& var : model.vars)
    if (var.type == VarType::Binary) have_binary = true;
  if (have_binary) {
    out << "Binary\n";
    for (const auto& var : model.vars)
      if (var.type == VarType::Binary) out << " " << var.name << "\n";
  }
  out << "End\n";
  return out.str();
}

}  // namespace idnet
