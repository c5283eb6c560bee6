#include <doctest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "oracles/uc_instances.hpp"
#include "pvint/unitcommit.hpp"

namespace fs = std::filesystem;

namespace {

/// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pvint_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(PVINT_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

void write_tiny(const fs::path& p, std::uint64_t seed, double demand_scale = 1.0) {
  auto in = oracle::tiny_instance(seed);
  in.scenario.demand *= demand_scale;
  std::ofstream out(p);
  pvint::uc::write_instance(out, in);
}

}  // namespace

TEST_CASE("synth writes the requested shape and is reproducible") {
  const fs::path d = scratch("synth");
  CHECK(run("synth --sites 47 --samples 420 --loading 0.6 --seed 7 --out " + (d / "a.csv").string()) == 0);
  // Basis comment, header, then one row per sample.
  CHECK(count_lines(d / "a.csv") == 422);
  std::ifstream in(d / "a.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind('#', 0) == 0);
  std::getline(in, header);
  CHECK(std::count(header.begin(), header.end(), ',') == 47);
  CHECK(run("synth --loading 0 --seed 3 --out " + (d / "b.csv").string()) == 0);
  CHECK(run("synth --loading 0 --seed 3 --out " + (d / "c.csv").string()) == 0);
  CHECK(slurp(d / "b.csv") == slurp(d / "c.csv"));
  CHECK(run("synth --sites 9 --out " + (d / "x.csv").string()) == 2);
  CHECK(run("synth --seed 1 --bogus") == 2);
}

TEST_CASE("analyze summaries") {
  const fs::path d = scratch("analyze");
  REQUIRE(run("synth --sites 9 --samples 420 --loading 0.6 --noise 0.8 --seed 11 --out " + (d / "f.csv").string()) == 0);
  REQUIRE(run("analyze --panel " + (d / "f.csv").string() + " --out " + (d / "fa").string()) == 0);
  const auto f = read_json(d / "fa" / "summary.json");
  CHECK(f["N"] == 9);
  CHECK(f["L"] == 420);
  CHECK(f["lambda_max"].get<double>() == doctest::Approx(1.3142).epsilon(1e-4 / 1.3142));
  CHECK(f["n_genuine"] == 1);
  CHECK(f["top_eigenvector_single_signed"] == true);
  CHECK(f["kurtosis"].size() == 9);

  REQUIRE(run("synth --sites 20 --samples 420 --loading 0 --seed 5 --out " + (d / "n.csv").string()) == 0);
  REQUIRE(run("analyze --panel " + (d / "n.csv").string() + " --out " + (d / "na").string()) == 0);
  CHECK(read_json(d / "na" / "summary.json")["n_genuine"] == 0);

  CHECK(run("analyze --panel " + (d / "missing.csv").string() + " --out " + (d / "m").string()) == 2);
}

TEST_CASE("error table and allocation checks") {
  const fs::path d = scratch("error");
  REQUIRE(run("synth --sites 6 --samples 420 --loading 0.5 --seed 2 --out " + (d / "p.csv").string()) == 0);
  REQUIRE(run("analyze --panel " + (d / "p.csv").string() + " --out " + (d / "a").string()) == 0);
  CHECK(run("error --analysis " + (d / "a").string() + " --mc-verify --mc-samples 200000 --out " +
            (d / "e").string()) == 0);
  CHECK(fs::exists(d / "e" / "error_table.csv"));
  const auto s = read_json(d / "e" / "error_summary.json");
  CHECK(s["sites"] == 6);
  REQUIRE(!s["mc_verify"].empty());
  for (const auto& m : s["mc_verify"]) CHECK(m["pass"] == true);

  {
    std::ofstream alloc(d / "bad.csv");
    alloc << "site,share\nS01,0.5\nS02,0.5\n";
  }
  CHECK(run("error --analysis " + (d / "a").string() + " --allocation " + (d / "bad.csv").string() + " --out " +
            (d / "e2").string()) == 2);
}

TEST_CASE("schedule and cost commands") {
  const fs::path d = scratch("schedule");
  write_tiny(d / "tiny.txt", 3);
  CHECK(run("schedule --config " + (d / "tiny.txt").string() + " --out " + (d / "s").string()) == 0);
  CHECK(fs::file_size(d / "s" / "violations.txt") == 0);
  const auto obj = read_json(d / "s" / "objective.json");
  CHECK(obj["status"] == "optimal");
  CHECK(fs::exists(d / "s" / "schedule.csv"));
  CHECK(fs::exists(d / "s" / "generation.csv"));

  write_tiny(d / "infeasible.txt", 3, 100.0);
  CHECK(run("schedule --config " + (d / "infeasible.txt").string() + " --out " + (d / "i").string()) == 3);
  CHECK(run("schedule --config " + (d / "nope.txt").string() + " --out " + (d / "x").string()) == 2);

  CHECK(run("cost --config " + (d / "tiny.txt").string() + " --grid 0 --out " + (d / "c").string()) == 0);
  std::ifstream sweep(d / "c" / "sweep.csv");
  std::string header, row;
  std::getline(sweep, header);
  std::getline(sweep, row);
  CHECK(header == "sigma_p,cv,cost_with,cost_without,epsilon,status");
  CHECK(row.rfind("0,0,", 0) == 0);
  CHECK(row.find(",0,optimal") != std::string::npos);
  CHECK(run("cost --config " + (d / "tiny.txt").string() + " --grid 1,0 --out " + (d / "c2").string()) == 2);
  CHECK(run("cost --config " + (d / "tiny.txt").string() + " --grid 0 --peak-percent 0 --out " +
            (d / "c3").string()) == 2);
}
