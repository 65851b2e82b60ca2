#pragma once

#include <string>

#include "json.hpp"
#include "stabletilt/kernels.hpp"
#include "stabletilt/params.hpp"
#include "stabletilt/quadrature.hpp"
#include "stabletilt/stable_process.hpp"

namespace stabletilt::runner {

using Json = nlohmann::ordered_json;

struct KernelConfig {
  std::string name = "fuchsian_capped";  // zero | fuchsian | fuchsian_capped | capped_power |
                                         // annulus_band | sparse_ball | sparse_ball_sqrt
  double C = 1.0;
  double beta = 1.0;
  double gamma = 0.0;
  int n_balls = 4;
  double value = 0.5;   // annulus_band level
  double lo = 1.0;      // annulus_band inner radius
  double hi = 2.0;      // annulus_band outer radius
  double scale = 1.0;   // optional rescaling of the kernel
};

struct McConfig {
  int n_paths = 400;
  double horizon = 20.0;
  double cutoff = 1e-2;
  SmallJumpPolicy policy = SmallJumpPolicy::Drop;
  int doublings = 4;
  std::uint64_t master_seed = 1;
};

struct ExperimentConfig {
  int schema = 1;
  std::string experiment = "Validate";  // Validate | Dichotomy | Entropy | Counterexample |
                                        // Harnack | Gauge | PotentialTables
  int d = 1;
  double alpha = 0.5;
  KernelConfig kernel;
  McConfig mc;
  QuadratureSpec quad;
  std::string expect_verdict;  // optional: assert the dichotomy verdict
  std::string matrix = "default";  // Validate: default | minimal
  std::string tables_what = "c1";  // PotentialTables: c1 | r0
  double tables_eps = 0.5;         // PotentialTables: epsilon for r0
  double tables_C = 1.0;
  int refine = 0;
  bool dump_paths = false;
  std::string output_dir = "out";

  StableParams params() const { return StableParams::make(d, alpha); }
  KernelSpec make_kernel() const;
};

Json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config(const std::string& path);

/// Applies "dotted.path=value" overrides onto the JSON document.
void apply_override(Json& j, const std::string& assignment);

}  // namespace stabletilt::runner
