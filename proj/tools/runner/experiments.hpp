#pragma once

#include "runner/config.hpp"
#include "runner/report.hpp"

namespace stabletilt::runner {

struct ExperimentResult {
  Json report;
  bool pass = false;
};

/// Executes the configured experiment, writes report.json (plus CSV tables
/// where the experiment produces them) under output_dir, and returns the
/// report with the aggregate verdict.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// The cross-estimator consistency battery on the default or minimal matrix.
ExperimentResult run_validate(const ExperimentConfig& cfg);

}  // namespace stabletilt::runner
