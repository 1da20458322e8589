#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "ipdmem/io.hpp"

using namespace ipdmem;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ipdmem");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "ipdmem_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::size_t line_count(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  return lines;
}

}  // namespace

TEST_CASE("usage errors exit nonzero") {
  CHECK(invoke({}).code != 0);
  CHECK(invoke({"dance"}).code != 0);
  CHECK(invoke({"run", "--bogus"}).code != 0);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("single run of two agents reports one round") {
  const auto r = invoke({"run", "--mode", "single", "--n", "2", "--tau", "1", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("rounds=1 ") != std::string::npos);
  CHECK(r.out.find("id,rho,strategy,payoff,games_played,rounds_refused") != std::string::npos);
  CHECK(r.out.find("\n1,1,FMC,") != std::string::npos);
}

TEST_CASE("run is deterministic") {
  const auto a = invoke({"run", "--mu", "0.4", "--tau", "2", "--seed", "9"});
  const auto b = invoke({"run", "--mu", "0.4", "--tau", "2", "--seed", "9"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("sweeps need a seed") {
  const auto r = invoke({"sweep", "--mode", "heterogeneous", "--tau", "1"});
  CHECK(r.code != 0);
  CHECK(r.err.find("seed") != std::string::npos);
}

TEST_CASE("sweep needs a curve mode") {
  const auto r = invoke({"sweep", "--seed", "1", "--tau", "1"});
  CHECK(r.code != 0);
  CHECK(r.err.find("mode") != std::string::npos);
}

TEST_CASE("bad flag values are reported") {
  const auto r = invoke({"run", "--payoffs", "5,3,1,4"});
  CHECK(r.code != 0);
  CHECK(r.err.find("S < P violated") != std::string::npos);
  CHECK(invoke({"run", "--strategy", "FMX"}).err.find("unknown strategy") != std::string::npos);
}

TEST_CASE("heterogeneous sweep writes 126 rows") {
  const auto path = scratch_dir() / "out.csv";
  const auto r = invoke({"sweep", "--mode", "heterogeneous", "--seed", "42", "-o", path.string(), "--tau", "1",
                         "--realizations", "1"});
  CHECK(r.code == 0);
  CHECK(line_count(path) == 127);
}

TEST_CASE("heatmap writes 2646 rows") {
  const auto path = scratch_dir() / "heatmap.csv";
  const auto r = invoke({"heatmap", "--seed", "42", "-o", path.string(), "--tau", "1", "--realizations", "1"});
  CHECK(r.code == 0);
  CHECK(line_count(path) == 2647);
}

TEST_CASE("config file with flag overrides") {
  const auto dir = scratch_dir();
  const auto config = dir / "homog.cfg";
  std::ofstream(config) << "mode = homogeneous\nstrategy = FR\nagents_per_rho = 1\nmaster_seed = 5\n"
                           "realizations = 2\nmu_list = 0.1, 0.9\ntau = 1\n";
  const auto r = invoke({"sweep", "-c", config.string(), "--mu-list", "0.5"});
  CHECK(r.code == 0);
  const ResultsTable table = parse_results(r.out);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].mode == "homogeneous");
  CHECK(table.rows[0].strategy == "FR");
  CHECK(table.rows[0].mu == 0.5);
  CHECK(table.rows[0].realizations == 2);

  const auto again = invoke({"sweep", "-c", config.string(), "--mu-list", "0.5"});
  CHECK(again.out == r.out);
  CHECK(invoke({"sweep", "-c", (dir / "missing.cfg").string()}).code != 0);
}

TEST_CASE("output directory from the environment") {
  const auto dir = scratch_dir() / "env_out";
  std::filesystem::create_directories(dir);
  ::setenv(kOutputDirVariable, dir.string().c_str(), 1);
  const auto r = invoke({"sweep", "--mode", "heterogeneous", "--seed", "1", "--tau", "1", "--realizations", "1",
                         "--mu-list", "0.5"});
  ::unsetenv(kOutputDirVariable);
  CHECK(r.code == 0);
  CHECK(line_count(dir / "heterogeneous.csv") == 7);
}

TEST_CASE("verify-endpoints passes") {
  const auto r = invoke({"verify-endpoints", "--seed", "7"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS mu=0 ") != std::string::npos);
  CHECK(r.out.find("PASS mu=1 ") != std::string::npos);
  CHECK(r.out.substr(r.out.size() - 5) == "PASS\n");
}
