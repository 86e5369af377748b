#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vpsm/config.hpp"
#include "vpsm/diag.hpp"

namespace vpsm {

/// Worker threads for the sweeps (no-op without OpenMP).
void set_threads(int n);

struct Step1dScheme {
  std::string name;
  /// Largest excursion above the step height or below zero, over all
  /// iterations, relative to the step height.
  double peak_overshoot = 0.0;
  double final_overshoot = 0.0;
  /// Largest relative mass change over the run.
  double mass_error = 0.0;
  std::vector<double> final_profile;
};

struct Step1dResult {
  std::vector<Step1dScheme> schemes;
  const Step1dScheme* find(const std::string& name) const;
};

/// Periodic step transport with PSM, SLS(K) and first-order upwind.
/// Writes step1d_stats.csv and one profile dump per scheme when out is set.
Step1dResult run_step1d(const RunConfig& c, const std::filesystem::path& out = {});

struct RotationResult {
  int steps = 0;
  double dt = 0.0;
  double l2_error = 0.0;
  double mass_error = 0.0;
  double max_wall_flux = 0.0;
};

/// Gaussian blob in solid-body rotation under Phi = B r^2 / 2 with the
/// unsplit finite-volume update. L2 error relative to the blob norm.
RotationResult run_rotation2d(const RunConfig& c, const std::filesystem::path& out = {});

struct DriftKineticResult {
  std::vector<DiagRecord> records;
  Extrema slice0;
  long steps = 0;
  /// Largest relative mass change of a single step.
  double max_step_mass_change = 0.0;
};

/// Slice used by the diagnostics: v index nv / 2, z index 0.
DiagRecord make_record(const DriftKineticSolver& s, long step, double dt);

/// Predictor-corrector benchmark run. Writes diagnostics.csv and slice
/// dumps at the configured times when out is set.
DriftKineticResult run_driftkinetic(const RunConfig& c, const std::filesystem::path& out = {});

/// Runs the configured experiment, echoing the effective config into the
/// output directory.
void run_experiment(const RunConfig& c);

}  // namespace vpsm
