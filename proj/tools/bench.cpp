// Times the serial reference kernels against their OpenMP counterparts:
// exact subset enumeration, importance-sampling trials, and naive Monte
// Carlo trials. Results are identical by construction; only speed differs.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "idnet/model.hpp"
#include "idnet/oracle.hpp"
#include "idnet/rng.hpp"
#include "idnet/sampler.hpp"

using namespace idnet;

namespace {

Network bench_chain(int interior, int universe, std::uint64_t seed) {
  SplitMix64 rng(seed);
  NetworkInput input;
  for (int u = 0; u < universe; ++u)
    input.supply_nodes.push_back(
        {"u" + std::to_string(u), rng.uniform(0.005, 0.05), std::nullopt});
  input.demand_nodes.push_back({"s", {}, std::nullopt});
  std::string prev = "s";
  for (int i = 0; i < interior; ++i) {
    DemandNodeInput node;
    node.id = "v" + std::to_string(i);
    // Round-robin base supplies cover the whole universe, so the oracle
    // really enumerates 2^universe subsets; one random extra per node.
    node.supplies.push_back("u" + std::to_string((2 * i) % universe));
    node.supplies.push_back("u" + std::to_string((2 * i + 1) % universe));
    std::string extra = "u" + std::to_string(rng.below(universe));
    if (std::find(node.supplies.begin(), node.supplies.end(), extra) ==
        node.supplies.end())
      node.supplies.push_back(extra);
    input.demand_nodes.push_back(std::move(node));
    input.edges.push_back({prev, input.demand_nodes.back().id});
    prev = input.demand_nodes.back().id;
  }
  input.demand_nodes.push_back({"t", {}, std::nullopt});
  input.edges.push_back({prev, "t"});
  input.terminals = {{"s"}, {"t"}};
  return Network::from_input(input);
}

template <typename F>
double time_best_of(int repeats, F&& body) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto start = std::chrono::steady_clock::now();
    body();
    double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    best = std::min(best, ms);
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool same) {
  std::printf("%-24s %10.1f ms %10.1f ms %8.2fx  results %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms, same ? "match" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
  int universe = argc > 2 ? std::atoi(argv[2]) : 22;
  std::uint64_t trials = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 2000000;

  Network net = bench_chain(12, universe, seed);
  Path path;
  path.nodes.push_back(net.source());
  for (int i = 0; i < 12; ++i) path.nodes.push_back(*net.demand_index("v" + std::to_string(i)));
  path.nodes.push_back(net.target());

  std::printf("threads: %d, supplies: %d, trials: %llu\n", omp_get_max_threads(),
              universe, static_cast<unsigned long long>(trials));
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    OracleOptions serial_opts;
    serial_opts.max_supplies = universe;
    serial_opts.parallel = false;
    OracleOptions parallel_opts = serial_opts;
    parallel_opts.parallel = true;
    ExactResult a, b;
    double serial_ms = time_best_of(3, [&] { a = exact_path_failure(net, path, serial_opts); });
    double parallel_ms =
        time_best_of(3, [&] { b = exact_path_failure(net, path, parallel_opts); });
    // Chunked and straight summation reassociate millions of additions;
    // agreement is to ~1e-11 relative, not bit-exact.
    report("oracle enumeration", serial_ms, parallel_ms,
           std::abs(a.probability - b.probability) <= 1e-10 * (a.probability + 1e-300));
  }

  {
    auto instance = detail::path_instance(net, path);
    std::uint64_t a = 0, b = 0;
    double serial_ms =
        time_best_of(3, [&] { a = detail::count_hits_serial(instance, trials, seed); });
    double parallel_ms =
        time_best_of(3, [&] { b = detail::count_hits_parallel(instance, trials, seed); });
    report("importance sampling", serial_ms, parallel_ms, a == b);
  }

  {
    auto instance = detail::path_instance(net, path);
    std::uint64_t a = 0, b = 0;
    double serial_ms = time_best_of(
        3, [&] { a = detail::count_event_trials_serial(instance, trials, seed); });
    double parallel_ms = time_best_of(
        3, [&] { b = detail::count_event_trials_parallel(instance, trials, seed); });
    report("naive Monte Carlo", serial_ms, parallel_ms, a == b);
  }
  return 0;
}
