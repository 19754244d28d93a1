#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "idnet/io.hpp"
#include "testutil.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(IDNET_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
    output.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

fs::path temp_dir() {
  auto dir = fs::temp_directory_path() / "idnet_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write_fixture_network() {
  auto net = testutil::dnf_fixture();
  auto file = (temp_dir() / "dnf.json").string();
  std::ofstream out(file);
  out << idnet::network_to_json(net);
  return file;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("validate accepts the fixture and reports crafted violations") {
  auto file = write_fixture_network();
  auto ok = run_cli("validate " + file);
  CHECK(ok.exit_code == 0);
  CHECK(ok.output == "ok\n");

  auto bad = (temp_dir() / "bad.json").string();
  std::ofstream out(bad);
  out << R"({"supply_nodes":[{"id":"u1","p_fail":2.0}],
             "demand_nodes":[{"id":"a","supplies":["u1"]}],
             "edges":[["a","zz"]]})";
  out.close();
  auto res = run_cli("validate " + bad);
  CHECK(res.exit_code == 0);  // violations are data, not failures
  CHECK(res.output.find("p_fail") != std::string::npos);
  CHECK(res.output.find("zz") != std::string::npos);
}

TEST_CASE("oracle and sampling agree on the fixture through the CLI") {
  auto file = write_fixture_network();
  auto oracle = run_cli("eval-path --net " + file +
                        " --path s,v1,v2,v3,v4,t --method oracle");
  CHECK(oracle.exit_code == 0);
  CHECK(oracle.output.find("0.5625") != std::string::npos);

  auto sampled = run_cli("eval-path --net " + file +
                         " --path s,v1,v2,v3,v4,t --method sampling "
                         "--epsilon 0.02 --delta 0.02 --seed 31 --json");
  CHECK(sampled.exit_code == 0);
  auto value_at = sampled.output.find("\"value\": ");
  REQUIRE(value_at != std::string::npos);
  double value = std::stod(sampled.output.substr(value_at + 9));
  CHECK(std::abs(value - 0.5625) <= 0.02 * 0.5625);
}

TEST_CASE("exit codes: usage 1, infeasible 2, budget 3") {
  auto file = write_fixture_network();
  CHECK(run_cli("eval-path --net " + file).exit_code == 1);

  auto disc = (temp_dir() / "disc.json").string();
  std::ofstream out(disc);
  out << R"({"supply_nodes":[{"id":"u1","p_fail":0.1}],
             "demand_nodes":[{"id":"s","supplies":[]},{"id":"a","supplies":["u1"]},
                             {"id":"t","supplies":[]}],
             "edges":[["s","a"]],"terminals":{"s":"s","t":"t"}})";
  out.close();
  CHECK(run_cli("best-path --net " + disc + " --method approx").exit_code == 2);
  CHECK(run_cli("oracle --net " + file +
                " --mode path --path s,v1,v2,v3,v4,t --cap 2")
            .exit_code == 3);
}

TEST_CASE("gen-scenario is byte-deterministic per seed") {
  auto dir = temp_dir();
  auto args = std::string(
      "gen-scenario --gen-nodes 9 --gen-edges 4 --supplies 7 --assign random-range "
      "--k-min 1 --k-max 3 --p-range 0.005,0.015 --seed 123 --out ");
  auto f1 = (dir / "gen1.json").string();
  auto f2 = (dir / "gen2.json").string();
  CHECK(run_cli(args + f1).exit_code == 0);
  CHECK(run_cli(args + f2).exit_code == 0);
  CHECK(read_file(f1) == read_file(f2));
  CHECK(!read_file(f1).empty());

  auto f3 = (dir / "gen3.json").string();
  CHECK(run_cli("gen-scenario --gen-nodes 9 --gen-edges 4 --supplies 7 "
                "--assign random-range --k-min 1 --k-max 3 --p-range 0.005,0.015 "
                "--seed 124 --out " + f3)
            .exit_code == 0);
  CHECK(read_file(f3) != read_file(f1));
}

TEST_CASE("indicators and bounds run end to end") {
  auto file = write_fixture_network();
  auto ind = run_cli("indicators --net " + file + " --path s,v1,v2,v3,v4,t --json");
  CHECK(ind.exit_code == 0);
  CHECK(ind.output.find("\"n_s_min\": 2") != std::string::npos);
  CHECK(ind.output.find("\"m_bar\": 4") != std::string::npos);

  auto b = run_cli("bounds --net " + file + " --path s,v1,v2,v3,v4,t");
  CHECK(b.exit_code == 0);
  CHECK(b.output.find("lower") != std::string::npos);
}

TEST_CASE("best-pair ilp reports resilience on a two-route network") {
  auto dir = temp_dir();
  auto file = (dir / "two.json").string();
  std::ofstream out(file);
  out << R"({"supply_nodes":[{"id":"u1","p_fail":0.1},{"id":"u2","p_fail":0.1}],
             "demand_nodes":[{"id":"s","supplies":[]},{"id":"a","supplies":["u1"]},
                             {"id":"b","supplies":["u2"]},{"id":"t","supplies":[]}],
             "edges":[["s","a"],["a","t"],["s","b"],["b","t"]],
             "terminals":{"s":"s","t":"t"}})";
  out.close();
  auto res = run_cli("best-pair --net " + file + " --method ilp --json");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("\"resilience\": 1") != std::string::npos);
  auto heuristic = run_cli("best-pair --net " + file + " --method heuristic");
  CHECK(heuristic.exit_code == 0);
}

TEST_CASE("export-lp output is byte-stable") {
  auto file = write_fixture_network();
  auto dir = temp_dir();
  auto f1 = (dir / "m1.lp").string();
  auto f2 = (dir / "m2.lp").string();
  CHECK(run_cli("export-lp --net " + file + " --model max-d --out " + f1).exit_code == 0);
  CHECK(run_cli("export-lp --net " + file + " --model max-d --out " + f2).exit_code == 0);
  auto text = read_file(f1);
  CHECK(text == read_file(f2));
  CHECK(text.find("Maximize") == 0);
  CHECK(text.find("Binary") != std::string::npos);
  CHECK(text.rfind("End\n") == text.size() - 4);
}

TEST_CASE("experiment emits reproducible reports and CSV") {
  auto file = write_fixture_network();
  auto dir = temp_dir();
  auto csv = (dir / "records.csv").string();
  std::string args = "experiment --net " + file +
                     " --methods sampling,naive,oracle --path s,v1,v2,v3,v4,t "
                     "--seed 5 --naive-trials 20000 --no-timing --json --csv " + csv;
  auto r1 = run_cli(args);
  auto r2 = run_cli(args);
  CHECK(r1.exit_code == 0);
  CHECK(r1.output == r2.output);
  CHECK(r1.output.find("\"aggregates\"") != std::string::npos);
  auto csv_text = read_file(csv);
  CHECK(csv_text.find("trial,method,value,runtime_ms,error") == 0);
  CHECK(csv_text.find("oracle") != std::string::npos);
}
