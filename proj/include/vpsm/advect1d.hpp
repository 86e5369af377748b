#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "vpsm/error.hpp"
#include "vpsm/mesh.hpp"
#include "vpsm/spline.hpp"
#include "vpsm/tridiag.hpp"

namespace vpsm {

struct LimiterConfig {
  bool enabled = false;
  double K = 5.0;
};

void validate(const LimiterConfig& lim);

inline constexpr int kMaxFootIterations = 25;
inline constexpr double kFootTolerance = 1e-12;

/// Displacement u solving u = dt a(x - u/2) by fixed-point iteration.
/// Converges to |du| <= tol or throws after kMaxFootIterations.
template <class Velocity>
double midpoint_displacement(double x, double dt, double tol, Velocity&& a) {
  double u = dt * a(x);
  for (int it = 0; it < kMaxFootIterations; ++it) {
    const double next = dt * a(x - 0.5 * u);
    const double du = std::fabs(next - u);
    u = next;
    if (du <= tol) return u;
  }
  throw NumericalError("characteristic foot did not converge at x = " + std::to_string(x));
}

/// Feet x* = x - dt a((x + x*)/2) of the given abscissae (implicit midpoint).
template <class Velocity>
std::vector<double> feet_implicit_midpoint(std::span<const double> nodes, Velocity&& a, double dt,
                                           double dx) {
  std::vector<double> feet(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    feet[k] = nodes[k] - midpoint_displacement(nodes[k], dt, kFootTolerance * dx, a);
  }
  return feet;
}

/// Backward semi-Lagrangian step of point values at cell centers.
std::vector<double> bsl_advect(std::span<const double> values, const Axis& axis,
                               std::span<const double> feet);

/// Conservative remap of cell averages; feet has one entry per node (n+1).
std::vector<double> psm_advect(std::span<const double> averages, const Axis& axis,
                               std::span<const double> feet);

/// (F(x_face) - F(foot)) / dt for the node with index face.
double psm_flux(const PrimitiveSpline& p, int face, double foot, double dt);

double upwind_flux(double f_left, double f_right, double a);

/// Ratio of the upstream slope to the local slope at face i+1/2.
/// A zero local slope returns +infinity.
double slope_ratio(double f_m1, double f_0, double f_p1, double f_p2, double a);

double sls_gamma(double theta, double K);
double sls_flux(double phi_psm, double phi_upwind, double theta, double K);

/// f_i - dt/dx (flux_{i+1} - flux_i); fluxes has n+1 entries.
std::vector<double> flux_form_update(std::span<const double> f, std::span<const double> fluxes,
                                     double dt, double dx);

/// Scratch buffers for one line; one instance per worker thread.
struct LineWorkspace {
  std::vector<double> sigma;
  std::vector<double> slopes;
  std::vector<double> swept;
  std::vector<double> upwind;
  std::vector<double> theta;
  std::vector<double> batch;
};

/// Prescribed second derivatives of the primitive at the two ends of a
/// Neumann line (cell units). Zero gives natural ends.
struct EndCurvature {
  double lo = 0.0;
  double hi = 0.0;
};

/// Conservative line transport in cell units. Face displacements u_k (in
/// cells, one per node 0..n) move mass u_k f across node k. Neumann lines
/// treat nodes 0 and n as walls.
class LineAdvector {
 public:
  LineAdvector() = default;
  LineAdvector(int n_cells, bool periodic);

  int cells() const { return n_; }
  bool periodic() const { return periodic_; }
  int knots() const { return solver_.size(); }
  const SlopeSolver& solver() const { return solver_; }

  /// Primitive slopes of f into ws.slopes.
  void slopes(std::span<const double> f, LineWorkspace& ws, EndCurvature ends = {}) const;

  /// Mass swept through every face (n+1 values) by the primitive spline
  /// whose slopes are in ws.slopes.
  void swept(std::span<const double> f, std::span<const double> u, LineWorkspace& ws) const;

  /// Blend ws.swept with the upwind flux face by face.
  void limit(std::span<const double> f, std::span<const double> u, double K,
             LineWorkspace& ws) const;

  /// Full step: out_i = f_i + S_i - S_{i+1}.
  void advect(std::span<const double> f, std::span<const double> u, const LimiterConfig& lim,
              std::span<double> out, LineWorkspace& ws, EndCurvature ends = {}) const;

  /// kernels::kLanes lines at once; slopes use the batched tridiagonal kernel.
  void advect_batch(const double* const* f, const double* const* u, const LimiterConfig& lim,
                    double* const* out, LineWorkspace& ws,
                    const EndCurvature* ends = nullptr) const;

  /// Throws when neighbouring feet cross.
  void check_feet(std::span<const double> u) const;

 private:
  void bend_ends(std::span<double> rhs, EndCurvature ends) const;
  void finish(std::span<const double> f, std::span<const double> u, const LimiterConfig& lim,
              std::span<double> out, LineWorkspace& ws) const;

  int n_ = 0;
  bool periodic_ = true;
  SlopeSolver solver_;
};

/// Backward semi-Lagrangian transport of center values along one line.
/// Displacements u_i are per cell center, in cells.
class BslLine {
 public:
  BslLine() = default;
  BslLine(int n_cells, bool periodic);

  int cells() const { return n_; }
  void advect(std::span<const double> f, std::span<const double> u, std::span<double> out,
              LineWorkspace& ws) const;

 private:
  int n_ = 0;
  bool periodic_ = true;
  SlopeSolver solver_;
};

/// Face velocities of one line, made evaluable anywhere by a cubic spline
/// through the node values (natural ends unless periodic). Coordinates and
/// velocities are in cells.
class LineVelocity {
 public:
  LineVelocity(std::span<const double> face_values, bool periodic);

  double operator()(double xi) const { return SplineView(values_, slopes_, periodic_).at(xi); }
  bool constant() const { return constant_; }

  /// Implicit-midpoint displacement of the point xi over dt.
  double displacement(double xi, double dt) const;

 private:
  std::vector<double> values_;
  std::vector<double> slopes_;
  bool periodic_ = true;
  bool constant_ = false;
};

}  // namespace vpsm
