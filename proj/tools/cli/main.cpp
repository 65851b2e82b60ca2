#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "runner/config.hpp"
#include "runner/experiments.hpp"

using namespace stabletilt::runner;

namespace {

void apply_env_output_dir(ExperimentConfig& cfg) {
  if (const char* dir = std::getenv("OUTPUT_DIR")) cfg.output_dir = dir;
}

int finish(const ExperimentResult& res, const std::string& output_dir) {
  std::printf("%s: %s (report in %s/report.json)\n",
              res.report["experiment"].get<std::string>().c_str(),
              res.pass ? "PASS" : "FAIL", output_dir.c_str());
  for (const auto& item : res.report["checks"])
    std::printf("  [%s] %s\n", item["pass"].get<bool>() ? "ok" : "FAIL",
                item["name"].get<std::string>().c_str());
  return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stabletilt: simulation and quadrature experiments for tilted stable processes"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("--override", overrides, "dotted-path override, e.g. mc.n_paths=1000");

  std::string matrix = "default";
  auto* validate = app.add_subcommand("validate", "cross-estimator consistency battery");
  validate->add_option("--matrix", matrix, "default | minimal")
      ->check(CLI::IsMember({"default", "minimal"}));

  std::string what = "c1";
  int d = 3;
  double alpha = 1.0, beta = 1.5, eps = 0.5, bigC = 1.0;
  int refine = 0;
  std::string out_dir = "out";
  auto* tables = app.add_subcommand("tables", "potential-theory tables (CSV)");
  tables->add_option("--what", what, "c1 | r0")->check(CLI::IsMember({"c1", "r0"}));
  tables->add_option("--d", d, "dimension");
  tables->add_option("--alpha", alpha, "stability index");
  tables->add_option("--beta", beta, "kernel exponent");
  tables->add_option("--eps", eps, "target bound for r0");
  tables->add_option("--C", bigC, "kernel constant for r0");
  tables->add_option("--refine", refine, "mesh refinement level");
  tables->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      Json j;
      {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot open config file: " + config_path);
        j = Json::parse(in);
      }
      for (const auto& ov : overrides) apply_override(j, ov);
      ExperimentConfig cfg = config_from_json(j);
      apply_env_output_dir(cfg);
      return finish(run_experiment(cfg), cfg.output_dir);
    }
    if (validate->parsed()) {
      ExperimentConfig cfg;
      cfg.experiment = "Validate";
      cfg.matrix = matrix;
      cfg.output_dir = "out";
      apply_env_output_dir(cfg);
      return finish(run_experiment(cfg), cfg.output_dir);
    }
    if (tables->parsed()) {
      ExperimentConfig cfg;
      cfg.experiment = "PotentialTables";
      cfg.d = d;
      cfg.alpha = alpha;
      cfg.kernel.beta = beta;
      cfg.tables_what = what;
      cfg.tables_eps = eps;
      cfg.tables_C = bigC;
      cfg.refine = refine;
      cfg.output_dir = out_dir;
      apply_env_output_dir(cfg);
      return finish(run_experiment(cfg), cfg.output_dir);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
