#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "runner/config.hpp"
#include "runner/experiments.hpp"

using namespace stabletilt::runner;
using stabletilt::SmallJumpPolicy;

namespace {

ExperimentConfig small_dichotomy() {
  ExperimentConfig cfg;
  cfg.experiment = "Dichotomy";
  cfg.d = 1;
  cfg.alpha = 0.5;
  cfg.kernel.name = "fuchsian_capped";
  cfg.kernel.beta = 1.0;
  cfg.mc.n_paths = 60;
  cfg.mc.horizon = 5.0;
  cfg.mc.cutoff = 2e-2;
  cfg.mc.doublings = 2;
  cfg.mc.master_seed = 7;
  cfg.output_dir = (std::filesystem::temp_directory_path() / "stabletilt_test_out").string();
  return cfg;
}

}  // namespace

TEST_CASE("config round-trips through json losslessly") {
  auto cfg = small_dichotomy();
  cfg.expect_verdict = "ConvergentAll";
  cfg.kernel.gamma = 0.25;
  cfg.mc.policy = SmallJumpPolicy::BrownianMatch;
  const Json j = to_json(cfg);
  const auto back = config_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.mc.policy == SmallJumpPolicy::BrownianMatch);
  CHECK(back.kernel.gamma == 0.25);
}

TEST_CASE("config validation rejects bad values") {
  auto j = to_json(small_dichotomy());
  j["mc"]["n_paths"] = 1;
  CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);
  j = to_json(small_dichotomy());
  j["mc"]["policy"] = "teleport";
  CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);
  j = to_json(small_dichotomy());
  j["schema"] = 2;
  CHECK_THROWS_AS(config_from_json(j), std::invalid_argument);
}

TEST_CASE("dotted overrides reach nested fields") {
  auto j = to_json(small_dichotomy());
  apply_override(j, "mc.n_paths=128");
  apply_override(j, "kernel.name=annulus_band");
  apply_override(j, "quad.tol=1e-4");
  const auto cfg = config_from_json(j);
  CHECK(cfg.mc.n_paths == 128);
  CHECK(cfg.kernel.name == "annulus_band");
  CHECK(cfg.quad.tol == doctest::Approx(1e-4));
  CHECK_THROWS_AS(apply_override(j, "no_equals_sign"), std::invalid_argument);
}

TEST_CASE("reports are byte-identical across reruns modulo timing") {
  auto cfg = small_dichotomy();
  auto r1 = run_experiment(cfg);
  auto r2 = run_experiment(cfg);
  CHECK(dump_report(strip_timing(r1.report)) == dump_report(strip_timing(r2.report)));
  CHECK(r1.pass);
  // report.json exists and parses
  auto path = std::filesystem::path(cfg.output_dir) / "report.json";
  REQUIRE(std::filesystem::exists(path));
  std::ifstream in(path);
  Json loaded = Json::parse(in);
  CHECK(loaded["experiment"] == "Dichotomy");
  CHECK(loaded.contains("runtime_seconds"));
}

TEST_CASE("experiments write only inside output_dir and honour dump_paths") {
  auto cfg = small_dichotomy();
  cfg.dump_paths = true;
  cfg.output_dir =
      (std::filesystem::temp_directory_path() / "stabletilt_test_out_dump").string();
  std::filesystem::remove_all(cfg.output_dir);
  auto res = run_experiment(cfg);
  CHECK(res.pass);
  CHECK(std::filesystem::exists(std::filesystem::path(cfg.output_dir) / "paths.jsonl"));
  CHECK(std::filesystem::exists(std::filesystem::path(cfg.output_dir) / "manifest.json"));
}

TEST_CASE("kernel construction from config covers the families") {
  auto cfg = small_dichotomy();
  for (const char* name :
       {"zero", "fuchsian", "fuchsian_capped", "capped_power", "annulus_band"}) {
    cfg.kernel.name = name;
    CHECK(cfg.make_kernel().name == name);
  }
  cfg.kernel.name = "sparse_ball";
  cfg.kernel.gamma = 0.25;
  cfg.kernel.beta = 1.0;
  CHECK(cfg.make_kernel().ball_count == 4);
  cfg.kernel.name = "unknown";
  CHECK_THROWS_AS(cfg.make_kernel(), std::invalid_argument);
  // scaled kernel
  cfg.kernel.name = "fuchsian";
  cfg.kernel.scale = 0.9;
  CHECK(cfg.make_kernel().name == "fuchsian_scaled");
}

TEST_CASE("potential tables experiment writes csv") {
  ExperimentConfig cfg;
  cfg.experiment = "PotentialTables";
  cfg.d = 1;
  cfg.alpha = 0.5;
  cfg.kernel.beta = 1.5;
  cfg.tables_what = "r0";
  cfg.output_dir =
      (std::filesystem::temp_directory_path() / "stabletilt_test_out_tables").string();
  auto res = run_experiment(cfg);
  CHECK(res.pass);
  CHECK(std::filesystem::exists(std::filesystem::path(cfg.output_dir) / "r0_table.csv"));
  CHECK(res.report["r0"].get<double>() > 0.0);
}
