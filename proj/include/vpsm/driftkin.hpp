#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vpsm/advect1d.hpp"
#include "vpsm/field.hpp"
#include "vpsm/fv2d.hpp"
#include "vpsm/mesh.hpp"

namespace vpsm {

enum class Scheme { BSL, PSM, SLS };
enum class Form { DirectionalSplit, FiniteVolume };

struct SchemeConfig {
  Scheme scheme = Scheme::PSM;
  Form form = Form::FiniteVolume;
  double K = 5.0;

  LimiterConfig limiter() const { return {scheme == Scheme::SLS, K}; }
};

/// BSL is only available with directional splitting.
void validate(const SchemeConfig& s);

const char* to_string(Scheme s);
const char* to_string(Form f);
Scheme parse_scheme(const std::string& s);
Form parse_form(const std::string& s);

struct CflConfig {
  double r = 0.5;
  double theta = 0.5;
  double z = 8.0;
  double v = 8.0;
  double dt_max = 8.0;
};

/// Phase-space extent and resolution of the benchmark.
struct BenchmarkGrid {
  int nr = 32;
  int ntheta = 128;
  int nz = 16;
  int nv = 16;
  double r_min = 0.1;
  double r_max = 14.5;
  double z_length = 1508.0;
  double v_max = 7.32;

  PhaseGrid4D build() const;
};

struct BenchmarkSpec {
  int m = 8;
  int n = 4;
  double epsilon = 1e-4;
  double r_peak = 7.3;
  double kappa_n = 0.055;
  double delta_n = 2.88;
  double kappa_T = 0.27586;
  double delta_T = 1.44;
  /// g(r) = exp(-(r - r_peak)^4 / delta_g^4)
  double delta_g = 3.0;
  double B = 1.0;
  double charge = 1.0;
  double mass = 1.0;
  double e = 1.0;
  double omega0 = 1.0;
  CflConfig cfl;
  double t_end = 4000.0;

  PhysicalParams physics() const;
};

void validate(const BenchmarkSpec& spec, const PhaseGrid4D& grid);

/// Cell-averaged distribution, index ((i ntheta + j) nz + k) nv + l.
struct Field4D {
  std::vector<double> f;
  double t = 0.0;
};

inline std::size_t index4(const PhaseGrid4D& g, int i, int j, int k, int l) {
  return ((static_cast<std::size_t>(i) * g.ntheta() + j) * g.nz() + k) * g.nv() + l;
}

/// f_eq (1 + g(r) h(v) eps cos(2 pi n z / L + m theta)) at cell centres.
Field4D init_distribution(const BenchmarkSpec& spec, const PhaseGrid4D& grid);

/// Discrete density of f_eq per radial cell, summed exactly as density_moment
/// sums, so that f_eq is a discrete steady state.
std::vector<double> calibrated_n0(const BenchmarkSpec& spec, const PhaseGrid4D& grid);

/// min over directions of CFL_d dx_d / max|a_d|, capped by dt_max.
double compute_dt(const FaceVelocity& a, const PhaseGrid4D& grid, const CflConfig& cfl);

/// Line and plane sweeps of the 4D transport. One instance per solver;
/// scratch buffers are kept per worker thread.
class Transport {
 public:
  Transport(const PhaseGrid4D& grid, const SchemeConfig& scheme);
  ~Transport();
  Transport(const Transport&) = delete;
  Transport& operator=(const Transport&) = delete;

  const SchemeConfig& scheme() const { return scheme_; }

  /// Dispatches on the configured form.
  void apply(std::span<const double> f, const FaceVelocity& a, double dt, std::span<double> out);

  /// v/2, z/2, theta/2, r, theta/2, z/2, v/2.
  void split(std::span<const double> f, const FaceVelocity& a, double dt, std::span<double> out);

  /// v/2, z/2, unsplit (r, theta) finite volume, z/2, v/2.
  void finite_volume(std::span<const double> f, const FaceVelocity& a, double dt,
                     std::span<double> out);

  void sweep_v(std::span<double> f, const FaceVelocity& a, double dt);
  void sweep_z(std::span<double> f, double dt);
  void sweep_theta(std::span<double> f, const FaceVelocity& a, double dt);
  void sweep_r(std::span<double> f, const FaceVelocity& a, double dt);
  void sweep_plane(std::span<double> f, const FaceVelocity& a, double dt);

 private:
  struct Scratch;
  Scratch& scratch();
  void theta_feet(const FaceVelocity& a, double dt);
  void r_feet(const FaceVelocity& a, double dt);
  void run_theta(std::span<double> f);
  void run_r(std::span<double> f);

  const PhaseGrid4D& grid_;
  SchemeConfig scheme_;
  LineAdvector r_line_, t_line_, z_line_, v_line_;
  BslLine r_bsl_, t_bsl_, z_bsl_, v_bsl_;
  std::vector<std::unique_ptr<Scratch>> scratch_;
  // Displacements (cells): theta per (i, k), r per (j, k). Conservative
  // sweeps use node values, BSL sweeps centre values.
  std::vector<double> theta_u_, r_u_;
  int theta_stride_ = 0, r_stride_ = 0;
};

/// The predictor-corrector drift-kinetic solver.
class DriftKineticSolver {
 public:
  DriftKineticSolver(const PhaseGrid4D& grid, const BenchmarkSpec& spec,
                     const SchemeConfig& scheme);
  DriftKineticSolver(const DriftKineticSolver&) = delete;
  DriftKineticSolver& operator=(const DriftKineticSolver&) = delete;

  const PhaseGrid4D& grid() const { return grid_; }
  const BenchmarkSpec& spec() const { return spec_; }
  const SchemeConfig& scheme() const { return transport_.scheme(); }
  const Field4D& state() const { return state_; }
  Field4D& state() { return state_; }
  std::span<const double> n0_cells() const { return solver_.n0_cells(); }

  /// Potential and velocities of a distribution.
  NodalPotential potential(std::span<const double> f) const;
  FaceVelocity velocity(std::span<const double> f) const;

  /// One predictor-corrector step; dt <= 0 selects the CFL time step,
  /// which is then capped by dt_limit. Returns the step used.
  double step(double dt = 0.0, double dt_limit = std::numeric_limits<double>::infinity());

  /// Potential and velocity at the start of the last step.
  const NodalPotential& potential_n() const { return phi_n_; }
  const FaceVelocity& velocity_n() const { return a_n_; }

  Transport& transport() { return transport_; }

 private:
  PhaseGrid4D grid_;
  BenchmarkSpec spec_;
  PhysicalParams params_;
  QuasiNeutralSolver solver_;
  Transport transport_;
  Field4D state_;
  NodalPotential phi_n_;
  FaceVelocity a_n_;
  std::vector<double> half_;
};

}  // namespace vpsm
