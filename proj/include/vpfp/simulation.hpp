#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vpfp/config_io.hpp"
#include "vpfp/diagnostics.hpp"
#include "vpfp/scenarios.hpp"

namespace vpfp {

struct RunOptions {
  std::string output_dir;  // empty: keep results in memory only
  bool entropy = true;     // entropy columns and the entropy balance
  std::function<void(const DGMesh&, const SimulationState&, const DiagnosticRecord&)> on_record;
  std::function<void(const DGMesh&, const SimulationState&, const StepReport&)> on_step;
};

struct RunResult {
  DGMesh mesh{2, 1.0};
  SimulationState state;
  LimitState limit;        // limit state for the final ion energy
  LimitState initial_limit;
  ConservedQuantities reference;
  std::vector<DiagnosticRecord> records;
  long steps = 0;
  long picard_iterations = 0;
  int max_picard_iterations = 0;
  std::vector<std::string> files;
};

/**
 * Initializes the scenario and advances it to t_end, recording diagnostics every
 * output_interval and snapshots at the configured times. When output_dir is set,
 * writes series.csv, snapshots/ and manifest.ini there; the manifest is written
 * also when a step fails, before the error propagates.
 */
RunResult run(const ScenarioConfig& cfg, const RunOptions& options = {});

}  // namespace vpfp
