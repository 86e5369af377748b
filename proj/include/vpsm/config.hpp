#pragma once

#include <string>
#include <vector>

#include "vpsm/driftkin.hpp"

namespace vpsm {

/// 1D periodic step transport: a top hat of the given height on cells
/// [step_begin, step_end), shifted by `shift` cells per iteration.
struct Step1dConfig {
  int cells = 70;
  double shift = 0.2;
  int iterations = 350;
  int step_begin = 20;
  int step_end = 40;
  double height = 1.0;
  /// psm, sls, upwind or all
  std::string schemes = "all";
};

/// Solid-body rotation of a Gaussian blob in an (r, theta) annulus.
struct Rotation2dConfig {
  int nr = 64;
  int ntheta = 128;
  double r_min = 1.0;
  double r_max = 10.0;
  double B = 1.0;
  double cfl = 0.5;
  double revolutions = 1.0;
  double blob_r = 5.5;
  double blob_theta = 0.0;
  double blob_width = 1.0;
};

struct RunConfig {
  std::string experiment = "driftkinetic";
  std::string out = "out";
  int stride = 10;
  /// Fixed time step; 0 selects the CFL rule.
  double dt = 0.0;
  int threads = 1;
  unsigned long seed = 1;

  SchemeConfig scheme;
  BenchmarkGrid grid;
  BenchmarkSpec bench;
  /// Stop after this many steps (0: run to t_end).
  long max_steps = 0;
  /// Times at which (r, theta) slices are dumped.
  std::vector<double> dump_times;

  Step1dConfig step1d;
  Rotation2dConfig rotation;
};

/// Parses "key = value" lines grouped in [sections]; '#' starts a comment.
/// Unknown sections or keys and malformed values raise ConfigError with
/// the offending line number.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// Every key with its effective value; parse_config(write_config(c)) == c.
std::string write_config(const RunConfig& c);

/// Cross-field checks, run before any allocation.
void validate(const RunConfig& c);

}  // namespace vpsm
