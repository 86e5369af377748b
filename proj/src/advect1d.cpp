#include "vpsm/advect1d.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "vpsm/kernels.hpp"

namespace vpsm {

void validate(const LimiterConfig& lim) {
  if (!(lim.K > 0.0) || !std::isfinite(lim.K)) {
    throw ConfigError("limiter constant K must be positive, got " + std::to_string(lim.K));
  }
}

std::vector<double> bsl_advect(std::span<const double> values, const Axis& axis,
                               std::span<const double> feet) {
  if (static_cast<int>(feet.size()) != axis.size()) {
    throw std::invalid_argument("bsl_advect needs one foot per cell center");
  }
  const CubicSpline spline(values, axis, Placement::Centers);
  std::vector<double> out(feet.size());
  for (std::size_t i = 0; i < feet.size(); ++i) out[i] = spline(feet[i]);
  return out;
}

std::vector<double> psm_advect(std::span<const double> averages, const Axis& axis,
                               std::span<const double> feet) {
  const int n = axis.size();
  if (static_cast<int>(feet.size()) != n + 1) {
    throw std::invalid_argument("psm_advect needs one foot per node");
  }
  const PrimitiveSpline p(averages, axis);
  const PrimitiveView view = p.view();
  std::vector<double> u(n + 1);
  for (int k = 0; k <= n; ++k) u[k] = k - axis.to_cell(feet[k]);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = view.remap_cell(i, u[i], u[i + 1]);
  return out;
}

double psm_flux(const PrimitiveSpline& p, int face, double foot, double dt) {
  const Axis& axis = p.axis();
  const double u = face - axis.to_cell(foot);
  if (std::fabs(u) > 1.0) {
    throw NumericalError("CFL violated at face " + std::to_string(face) + ": displacement " +
                         std::to_string(u) + " cells");
  }
  return axis.step() * p.view().swept(face, u) / dt;
}

double upwind_flux(double f_left, double f_right, double a) {
  if (a > 0.0) return a * f_left;
  if (a < 0.0) return a * f_right;
  return 0.0;
}

double slope_ratio(double f_m1, double f_0, double f_p1, double f_p2, double a) {
  const double local = f_p1 - f_0;
  if (local == 0.0) return std::numeric_limits<double>::infinity();
  const double upstream = a >= 0.0 ? f_0 - f_m1 : f_p2 - f_p1;
  return upstream / local;
}

double sls_gamma(double theta, double K) {
  return std::max(0.0, std::min(K * std::fabs(theta), 1.0));
}

double sls_flux(double phi_psm, double phi_upwind, double theta, double K) {
  const double g = sls_gamma(theta, K);
  return g * phi_psm + (1.0 - g) * phi_upwind;
}

std::vector<double> flux_form_update(std::span<const double> f, std::span<const double> fluxes,
                                     double dt, double dx) {
  if (fluxes.size() != f.size() + 1) throw std::invalid_argument("need n+1 fluxes");
  const double c = dt / dx;
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] - c * (fluxes[i + 1] - fluxes[i]);
  return out;
}

// ---------------------------------------------------------------------------

LineAdvector::LineAdvector(int n_cells, bool periodic)
    : n_(n_cells),
      periodic_(periodic),
      solver_(periodic ? n_cells : n_cells + 1,
              periodic ? EndCondition::Periodic : EndCondition::Natural) {
  if (n_cells < 4) throw std::invalid_argument("line needs at least 4 cells");
}

void LineAdvector::bend_ends(std::span<double> rhs, EndCurvature ends) const {
  if (periodic_) return;
  // End rows 2 s_0 + s_1 = 3 d_0 - F''_0 / 2 and s_{n-1} + 2 s_n = 3 d_{n-1} + F''_n / 2.
  rhs.front() -= 0.5 * ends.lo;
  rhs.back() += 0.5 * ends.hi;
}

void LineAdvector::slopes(std::span<const double> f, LineWorkspace& ws, EndCurvature ends) const {
  const int m = knots();
  ws.sigma.resize(m);
  ws.slopes.resize(m);
  primitive_system(f, solver_.end_condition(), ws.sigma, ws.slopes);
  bend_ends(ws.slopes, ends);
  solver_.solve(ws.slopes);
  for (int k = 0; k < m; ++k) ws.slopes[k] = ws.sigma[k] + ws.slopes[k];
}

void LineAdvector::swept(std::span<const double> f, std::span<const double> u,
                         LineWorkspace& ws) const {
  const PrimitiveView view(f, ws.slopes, periodic_);
  ws.swept.resize(n_ + 1);
  if (periodic_) {
    for (int k = 0; k < n_; ++k) ws.swept[k] = view.swept(k, u[k]);
    ws.swept[n_] = ws.swept[0];
  } else {
    ws.swept[0] = 0.0;
    for (int k = 1; k < n_; ++k) ws.swept[k] = view.swept(k, u[k]);
    ws.swept[n_] = 0.0;
  }
}

void LineAdvector::limit(std::span<const double> f, std::span<const double> u, double K,
                         LineWorkspace& ws) const {
  const int n = n_;
  ws.upwind.assign(n + 1, 0.0);
  ws.theta.assign(n + 1, 0.0);
  auto at = [&](int c) {
    if (periodic_) return f[c < 0 ? c + n : (c >= n ? c - n : c)];
    return f[std::clamp(c, 0, n - 1)];
  };
  const int first = periodic_ ? 0 : 1;
  for (int k = first; k < n; ++k) {
    const double uk = u[k];
    if (uk > 0.0) ws.upwind[k] = uk * at(k - 1);
    else if (uk < 0.0) ws.upwind[k] = uk * at(k);
    int s = k;
    if (!periodic_) {
      // Stencil cells k-2..k+1 must exist; otherwise borrow the nearest
      // interior face's ratio.
      if (uk >= 0.0 && k < 2) s = std::min(2, n - 1);
      if (uk < 0.0 && k > n - 2) s = std::max(n - 2, 1);
    }
    ws.theta[k] = slope_ratio(at(s - 2), at(s - 1), at(s), at(s + 1), uk);
  }
  if (periodic_) {
    ws.upwind[n] = ws.upwind[0];
    ws.theta[n] = ws.theta[0];
  }
  kernels::active().sls_blend(ws.swept.data(), ws.upwind.data(), ws.theta.data(), K,
                              ws.swept.data(), n + 1);
}

void LineAdvector::check_feet(std::span<const double> u) const {
  for (int i = 0; i < n_; ++i) {
    const double ul = (!periodic_ && i == 0) ? 0.0 : u[i];
    const double ur = (!periodic_ && i + 1 == n_) ? 0.0 : u[i + 1];
    if (ur - ul > 1.0) {
      throw NumericalError("characteristic feet cross in cell " + std::to_string(i));
    }
  }
}

void LineAdvector::finish(std::span<const double> f, std::span<const double> u,
                          const LimiterConfig& lim, std::span<double> out,
                          LineWorkspace& ws) const {
  swept(f, u, ws);
  if (lim.enabled) limit(f, u, lim.K, ws);
  kernels::active().conservative_update(f.data(), ws.swept.data(), out.data(), n_);
}

void LineAdvector::advect(std::span<const double> f, std::span<const double> u,
                          const LimiterConfig& lim, std::span<double> out,
                          LineWorkspace& ws, EndCurvature ends) const {
  check_feet(u);
  slopes(f, ws, ends);
  finish(f, u, lim, out, ws);
}

void LineAdvector::advect_batch(const double* const* f, const double* const* u,
                                const LimiterConfig& lim, double* const* out,
                                LineWorkspace& ws, const EndCurvature* ends) const {
  constexpr int L = kernels::kLanes;
  const int m = knots();
  ws.batch.resize(static_cast<std::size_t>(m) * L * 2);
  double* sig = ws.batch.data();
  double* rhs = sig + static_cast<std::size_t>(m) * L;
  ws.sigma.resize(m);
  ws.slopes.resize(m);
  for (int lane = 0; lane < L; ++lane) {
    check_feet({u[lane], static_cast<std::size_t>(n_ + 1)});
    primitive_system({f[lane], static_cast<std::size_t>(n_)}, solver_.end_condition(), ws.sigma,
                     ws.slopes);
    if (ends) bend_ends(ws.slopes, ends[lane]);
    for (int k = 0; k < m; ++k) {
      sig[k * L + lane] = ws.sigma[k];
      rhs[k * L + lane] = ws.slopes[k];
    }
  }
  solver_.solve4(rhs);
  for (int lane = 0; lane < L; ++lane) {
    for (int k = 0; k < m; ++k) ws.slopes[k] = sig[k * L + lane] + rhs[k * L + lane];
    finish({f[lane], static_cast<std::size_t>(n_)}, {u[lane], static_cast<std::size_t>(n_ + 1)},
           lim, {out[lane], static_cast<std::size_t>(n_)}, ws);
  }
}

// ---------------------------------------------------------------------------

BslLine::BslLine(int n_cells, bool periodic)
    : n_(n_cells),
      periodic_(periodic),
      solver_(n_cells, periodic ? EndCondition::Periodic : EndCondition::ClampedZeroSlope) {
  if (n_cells < 4) throw std::invalid_argument("line needs at least 4 cells");
}

void BslLine::advect(std::span<const double> f, std::span<const double> u, std::span<double> out,
                     LineWorkspace& ws) const {
  ws.sigma.resize(n_);
  ws.slopes.resize(n_);
  interpolation_system(f, solver_.end_condition(), ws.sigma, ws.slopes);
  solver_.solve(ws.slopes);
  for (int k = 0; k < n_; ++k) ws.slopes[k] = ws.sigma[k] + ws.slopes[k];
  const SplineView view(f, ws.slopes, periodic_);
  for (int i = 0; i < n_; ++i) out[i] = view.at(i - u[i]);
}

// ---------------------------------------------------------------------------

LineVelocity::LineVelocity(std::span<const double> face_values, bool periodic)
    : values_(face_values.begin(), face_values.end()), periodic_(periodic) {
  constant_ = std::all_of(values_.begin(), values_.end(),
                          [&](double a) { return a == values_.front(); });
  if (constant_) {
    slopes_.assign(values_.size(), 0.0);
    return;
  }
  const SlopeSolver solver(static_cast<int>(values_.size()),
                           periodic ? EndCondition::Periodic : EndCondition::Natural);
  slopes_ = interpolation_slopes(values_, solver);
}

double LineVelocity::displacement(double xi, double dt) const {
  if (constant_) return dt * values_.front();
  return midpoint_displacement(xi, dt, kFootTolerance, *this);
}

}  // namespace vpsm
