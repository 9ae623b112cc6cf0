#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "stochroute/cli.hpp"
#include "stochroute/json_io.hpp"

using namespace stochroute;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("stochroute_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

RunConfig small_generate(const TempDir& dir) {
  RunConfig cfg;
  cfg.command = "generate";
  cfg.out_dir = dir.path.string();
  cfg.pois = 4;
  cfg.refuel = 1;
  cfg.vehicles = 2;
  cfg.multiplier = 2.75;
  cfg.seed = 9;
  cfg.avail = {1.0, 0.5};
  return cfg;
}

}  // namespace

TEST_CASE("generate writes byte-identical artifacts under a fixed seed") {
  TempDir a("gen_a"), b("gen_b");
  auto ca = small_generate(a);
  auto cb = small_generate(b);
  REQUIRE(run(ca) == 0);
  REQUIRE(run(cb) == 0);
  CHECK(read_text_file(a.file("instance.json")) == read_text_file(b.file("instance.json")));
  CHECK(read_text_file(a.file("scenarios.json")) == read_text_file(b.file("scenarios.json")));
  CHECK(fs::exists(a.file("repro.json")));
}

TEST_CASE("solve: decomposition and extensive agree; outputs are complete") {
  TempDir dir("solve");
  REQUIRE(run(small_generate(dir)) == 0);

  RunConfig solve_cfg;
  solve_cfg.command = "solve";
  solve_cfg.out_dir = dir.path.string();
  solve_cfg.instance_path = dir.file("instance.json");
  solve_cfg.scenarios_path = dir.file("scenarios.json");
  solve_cfg.formulation = "profit";
  solve_cfg.method = "lshaped";
  solve_cfg.eps = 1e-9;
  REQUIRE(run(solve_cfg) == 0);
  auto lshaped_result = json::parse(read_text_file(dir.file("result.json")));
  CHECK(lshaped_result["status"] == "optimal");
  CHECK(fs::exists(dir.file("trace.csv")));
  CHECK(read_text_file(dir.file("trace.csv")).rfind("iteration,lb,ub,gap,seconds", 0) == 0);

  solve_cfg.method = "extensive";
  REQUIRE(run(solve_cfg) == 0);
  auto ext_result = json::parse(read_text_file(dir.file("result.json")));
  double a = lshaped_result["objective"].get<double>();
  double b = ext_result["objective"].get<double>();
  CHECK(std::fabs(a - b) <= 1e-4 * std::max(1.0, std::fabs(a)));
  CHECK(ext_result.contains("routes"));
  CHECK(ext_result.contains("per_vehicle_profit"));
  CHECK(ext_result.contains("per_scenario_beta"));
}

TEST_CASE("solve result JSON is byte-identical across reruns") {
  TempDir dir("det");
  REQUIRE(run(small_generate(dir)) == 0);
  RunConfig solve_cfg;
  solve_cfg.command = "solve";
  solve_cfg.out_dir = dir.path.string();
  solve_cfg.instance_path = dir.file("instance.json");
  solve_cfg.scenarios_path = dir.file("scenarios.json");
  solve_cfg.formulation = "profit";
  REQUIRE(run(solve_cfg) == 0);
  auto first = read_text_file(dir.file("result.json"));
  REQUIRE(run(solve_cfg) == 0);
  CHECK(first == read_text_file(dir.file("result.json")));
}

TEST_CASE("min formulation rejects the decomposition with a diagnostic") {
  TempDir dir("reject");
  REQUIRE(run(small_generate(dir)) == 0);
  RunConfig cfg;
  cfg.command = "solve";
  cfg.out_dir = dir.path.string();
  cfg.instance_path = dir.file("instance.json");
  cfg.formulation = "min";
  cfg.method = "lshaped";
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
}

TEST_CASE("vss on a single-scenario set reports zero") {
  TempDir dir("vss");
  auto gen = small_generate(dir);
  gen.avail = {1.0, 1.0};
  REQUIRE(run(gen) == 0);
  RunConfig cfg;
  cfg.command = "vss";
  cfg.out_dir = dir.path.string();
  cfg.instance_path = dir.file("instance.json");
  cfg.scenarios_path = dir.file("scenarios.json");
  cfg.formulation = "profit";
  cfg.emit_svg = true;
  REQUIRE(run(cfg) == 0);
  auto rep = json::parse(read_text_file(dir.file("vss.json")));
  CHECK(std::fabs(rep["vss"].get<double>()) < 1e-9);
  CHECK(fs::exists(dir.file("vss.csv")));
  CHECK(fs::exists(dir.file("vss.svg")));
}

TEST_CASE("sweep emits one case per probability with stable CSV schema") {
  TempDir dir("sweep");
  auto gen = small_generate(dir);
  gen.vehicles = 2;
  gen.avail.clear();
  gen.fuel_model = "none";
  REQUIRE(run(gen) == 0);
  RunConfig cfg;
  cfg.command = "sweep";
  cfg.out_dir = dir.path.string();
  cfg.instance_path = dir.file("instance.json");
  cfg.sweep_vehicle = 2;
  cfg.sweep_probs = {1.0, 0.5, 0.0};
  REQUIRE(run(cfg) == 0);
  auto rep = json::parse(read_text_file(dir.file("sweep.json")));
  CHECK(rep["cases"].size() == 3);
  auto csv = read_text_file(dir.file("sweep.csv"));
  CHECK(csv.rfind("probability,objective,profit_v1,profit_v2", 0) == 0);
}

TEST_CASE("oracle command writes its verdict") {
  TempDir dir("oracle");
  auto gen = small_generate(dir);
  gen.pois = 3;
  REQUIRE(run(gen) == 0);
  RunConfig cfg;
  cfg.command = "oracle";
  cfg.out_dir = dir.path.string();
  cfg.instance_path = dir.file("instance.json");
  cfg.scenarios_path = dir.file("scenarios.json");
  cfg.formulation = "profit";
  REQUIRE(run(cfg) == 0);
  auto rep = json::parse(read_text_file(dir.file("oracle.json")));
  CHECK(rep.contains("objective"));
  CHECK(rep.contains("routes"));
}

TEST_CASE("dump-lp emits a readable model") {
  TempDir dir("dump");
  REQUIRE(run(small_generate(dir)) == 0);
  RunConfig cfg;
  cfg.command = "solve";
  cfg.out_dir = dir.path.string();
  cfg.instance_path = dir.file("instance.json");
  cfg.formulation = "profit";
  cfg.method = "extensive";
  cfg.dump_lp_path = dir.file("model.lp");
  REQUIRE(run(cfg) == 0);
  auto text = read_text_file(dir.file("model.lp"));
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
}
