#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "plrf/csv.hpp"
#include "plrf/pipeline.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const char* cli_path() { return PLRF_CLI_PATH; }

struct CommandResult {
  int exit_code;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string cmd = std::string(cli_path()) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof(buf), pipe)) output.append(buf, n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("plrf_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("simulate writes one curve per (d, seed) plus a manifest") {
  const fs::path dir = fresh_dir("simulate");
  const std::string args =
      "simulate --set alpha=0.7 --set beta=0.3 --set d_list=50,100 --set seeds=2 "
      "--set horizon=1000 --set sampler=direct --set out_dir=" +
      dir.string();
  const CommandResult res = run_cli(args);
  CHECK(res.exit_code == 0);
  int curve_files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".csv") ++curve_files;
  }
  CHECK(curve_files == 4);
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("rerunning the same config is byte-identical") {
  const fs::path dir1 = fresh_dir("repro1");
  const fs::path dir2 = fresh_dir("repro2");
  const std::string common =
      "simulate --set alpha=0.5 --set beta=0.7 --set d_list=40,80 --set seeds=1 "
      "--set horizon=500 --set sampler=eigen --set out_dir=";
  CHECK(run_cli(common + dir1.string()).exit_code == 0);
  CHECK(run_cli(common + dir2.string()).exit_code == 0);
  for (const auto& e : fs::directory_iterator(dir1)) {
    if (e.path().extension() != ".csv") continue;
    CHECK(read_file(e.path()) == read_file(dir2 / e.path().filename()));
  }
}

TEST_CASE("artifacts are reproducible from the manifest alone") {
  const fs::path dir1 = fresh_dir("manifest1");
  const fs::path dir2 = fresh_dir("manifest2");
  const std::string args =
      "simulate --set alpha=0.6 --set beta=0.4 --set d_list=30,60 --set seeds=1 "
      "--set horizon=300 --set sampler=eigen --set out_dir=" +
      dir1.string();
  CHECK(run_cli(args).exit_code == 0);
  const std::string rerun = "simulate --from-manifest " + (dir1 / "manifest.json").string() +
                            " --set out_dir=" + dir2.string();
  CHECK(run_cli(rerun).exit_code == 0);
  for (const auto& e : fs::directory_iterator(dir1)) {
    if (e.path().extension() != ".csv") continue;
    CHECK(read_file(e.path()) == read_file(dir2 / e.path().filename()));
  }
}

TEST_CASE("volterra --naive agrees with the fast solver") {
  const fs::path fast_dir = fresh_dir("volt_fast");
  const fs::path naive_dir = fresh_dir("volt_naive");
  const std::string common =
      "volterra --set alpha=0.7 --set beta=0.7 --set d_list=50 --set seeds=1 "
      "--set horizon=2000 --set out_dir=";
  CHECK(run_cli(common + fast_dir.string()).exit_code == 0);
  CHECK(run_cli(common + naive_dir.string() + " --naive").exit_code == 0);
  const auto fast = plrf::read_curves_csv((fast_dir / "volterra_d50_s0.csv").string());
  const auto naive = plrf::read_curves_csv((naive_dir / "volterra_d50_s0.csv").string());
  REQUIRE(fast.size() == 1);
  REQUIRE(naive.size() == 1);
  REQUIRE(fast[0].points.size() == naive[0].points.size());
  for (size_t i = 0; i < fast[0].points.size(); ++i) {
    CHECK(fast[0].points[i].risk ==
          doctest::Approx(naive[0].points[i].risk).epsilon(1e-10));
  }
}

TEST_CASE("phase subcommand emits the classification JSON") {
  const CommandResult res = run_cli("phase 0.7 1.2");
  CHECK(res.exit_code == 0);
  const json j = json::parse(res.output);
  CHECK(j.at("phase") == "III");
  CHECK(j.at("eta").get<double>() == doctest::Approx(0.642857142857).epsilon(1e-9));
  CHECK(j.at("xi").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pipeline closure: simulate and volterra feed the same frontier") {
  const fs::path sgd_dir = fresh_dir("closure_sgd");
  const fs::path volt_dir = fresh_dir("closure_volt");
  const std::string base =
      " --set alpha=0.5 --set beta=0.7 --set d_list=32,64,128,256 --set seeds=1 "
      "--set flops_budget=2.6e6 --set out_dir=";
  CHECK(run_cli("simulate" + base + sgd_dir.string()).exit_code == 0);
  CHECK(run_cli("volterra" + base + volt_dir.string()).exit_code == 0);
  for (const fs::path& dir : {sgd_dir, volt_dir}) {
    const fs::path report = dir / "report.json";
    const CommandResult res =
        run_cli("frontier '" + (dir / "*.csv").string() + "' --window 2e4,1e6 --slices 8 --out " +
                report.string());
    CHECK(res.exit_code == 0);
    const json j = json::parse(read_file(report));
    CHECK(j.contains("eta"));
    CHECK(j.contains("xi"));
    CHECK(j.at("slices").size() == 8);
  }
}

TEST_CASE("config errors exit with code 2") {
  const CommandResult res = run_cli("simulate --set alpha=-1 --set horizon=10");
  CHECK(res.exit_code == 2);
}
