#include "vpsm/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vpsm/error.hpp"

namespace vpsm {

void slope_residual(std::span<const double> sigma, EndCondition ec, std::span<double> rhs) {
  const int n = static_cast<int>(sigma.size());
  if (static_cast<int>(rhs.size()) != n) throw std::invalid_argument("slope system size mismatch");
  auto curvature = [&](int km, int k, int kp) {
    return -((sigma[kp] - sigma[k]) - (sigma[k] - sigma[km]));
  };
  for (int k = 1; k + 1 < n; ++k) rhs[k] = curvature(k - 1, k, k + 1);
  switch (ec) {
    case EndCondition::Periodic:
      rhs[0] = curvature(n - 1, 0, 1);
      rhs[n - 1] = curvature(n - 2, n - 1, 0);
      break;
    case EndCondition::Natural:
      rhs[0] = sigma[0] - sigma[1];
      rhs[n - 1] = sigma[n - 1] - sigma[n - 2];
      break;
    case EndCondition::ClampedZeroSlope:
      rhs[0] = 0.0;
      rhs[n - 1] = 0.0;
      break;
  }
}

void interpolation_system(std::span<const double> y, EndCondition ec, std::span<double> sigma,
                          std::span<double> rhs) {
  const int n = static_cast<int>(y.size());
  if (n < 4) throw std::invalid_argument("interpolating spline needs at least 4 values");
  for (int k = 1; k + 1 < n; ++k) sigma[k] = 0.5 * (y[k + 1] - y[k - 1]);
  switch (ec) {
    case EndCondition::Periodic:
      sigma[0] = 0.5 * (y[1] - y[n - 1]);
      sigma[n - 1] = 0.5 * (y[0] - y[n - 2]);
      break;
    case EndCondition::Natural:
      sigma[0] = y[1] - y[0];
      sigma[n - 1] = y[n - 1] - y[n - 2];
      break;
    case EndCondition::ClampedZeroSlope:
      sigma[0] = 0.0;
      sigma[n - 1] = 0.0;
      break;
  }
  slope_residual(sigma, ec, rhs);
}

void primitive_system(std::span<const double> fbar, EndCondition ec, std::span<double> sigma,
                      std::span<double> rhs) {
  const int n = static_cast<int>(fbar.size());
  if (n < 4) throw std::invalid_argument("primitive spline needs at least 4 cells");
  switch (ec) {
    case EndCondition::Periodic:
      sigma[0] = 0.5 * (fbar[n - 1] + fbar[0]);
      for (int k = 1; k < n; ++k) sigma[k] = 0.5 * (fbar[k - 1] + fbar[k]);
      break;
    case EndCondition::Natural:
      sigma[0] = fbar[0];
      for (int k = 1; k < n; ++k) sigma[k] = 0.5 * (fbar[k - 1] + fbar[k]);
      sigma[n] = fbar[n - 1];
      break;
    case EndCondition::ClampedZeroSlope:
      throw std::invalid_argument("primitive splines use natural or periodic ends");
  }
  slope_residual(sigma, ec, rhs);
}

namespace {

std::vector<double> finish_slopes(std::vector<double> sigma, std::vector<double> delta,
                                  const SlopeSolver& solver) {
  solver.solve(delta);
  for (std::size_t k = 0; k < sigma.size(); ++k) sigma[k] += delta[k];
  return sigma;
}

}  // namespace

std::vector<double> interpolation_slopes(std::span<const double> y, const SlopeSolver& solver) {
  if (static_cast<int>(y.size()) != solver.size()) {
    throw std::invalid_argument("value count does not match spline knots");
  }
  std::vector<double> sigma(y.size()), rhs(y.size());
  interpolation_system(y, solver.end_condition(), sigma, rhs);
  return finish_slopes(std::move(sigma), std::move(rhs), solver);
}

std::vector<double> primitive_slopes(std::span<const double> fbar, const SlopeSolver& solver) {
  const std::size_t knots =
      solver.end_condition() == EndCondition::Periodic ? fbar.size() : fbar.size() + 1;
  if (static_cast<int>(knots) != solver.size()) {
    throw std::invalid_argument("cell count does not match primitive spline knots");
  }
  std::vector<double> sigma(knots), rhs(knots);
  primitive_system(fbar, solver.end_condition(), sigma, rhs);
  return finish_slopes(std::move(sigma), std::move(rhs), solver);
}

// ---------------------------------------------------------------------------

HermiteSegment SplineView::locate(double eta, double& t) const {
  const int n = knots();
  int k;
  if (periodic_) {
    eta -= std::floor(eta / n) * n;
    k = static_cast<int>(std::floor(eta));
    if (k >= n) {
      k = 0;
      eta = 0.0;
    }
    t = eta - k;
    const int k1 = k + 1 == n ? 0 : k + 1;
    return {y_[k], y_[k1], s_[k], s_[k1]};
  }
  if (eta <= 0.0) {
    k = 0;
    t = 0.0;
  } else if (eta >= n - 1) {
    k = n - 2;
    t = 1.0;
  } else {
    k = static_cast<int>(std::floor(eta));
    t = eta - k;
  }
  return {y_[k], y_[k + 1], s_[k], s_[k + 1]};
}

double SplineView::at(double eta) const {
  double t;
  const HermiteSegment seg = locate(eta, t);
  return seg.value(t);
}

double SplineView::derivative_at(double eta) const {
  double t;
  const HermiteSegment seg = locate(eta, t);
  return seg.derivative(t);
}

double SplineView::second_derivative_at(double eta) const {
  double t;
  const HermiteSegment seg = locate(eta, t);
  return seg.second_derivative(t);
}

CubicSpline::CubicSpline(std::span<const double> values, const Axis& axis, Placement where)
    : y_(values.begin(), values.end()), h_(axis.step()) {
  const int n = axis.size();
  std::size_t expected;
  if (where == Placement::Centers) {
    x0_ = axis.center(0);
    ec_ = axis.periodic() ? EndCondition::Periodic : EndCondition::ClampedZeroSlope;
    expected = n;
  } else {
    x0_ = axis.lo();
    ec_ = axis.periodic() ? EndCondition::Periodic : EndCondition::Natural;
    expected = axis.periodic() ? n : n + 1;
  }
  if (y_.size() != expected) throw std::invalid_argument("spline value count does not match axis");
  const SlopeSolver solver(static_cast<int>(y_.size()), ec_);
  s_ = interpolation_slopes(y_, solver);
}

double CubicSpline::operator()(double x) const { return view().at(knot_coord(x)); }
double CubicSpline::derivative(double x) const { return view().derivative_at(knot_coord(x)) / h_; }
double CubicSpline::second_derivative(double x) const {
  return view().second_derivative_at(knot_coord(x)) / (h_ * h_);
}

CubicSpline interpolating_spline(std::span<const double> values, const Axis& axis,
                                 Placement where) {
  return CubicSpline(values, axis, where);
}

// ---------------------------------------------------------------------------

double PrimitiveView::partial_left(int c, double t) const {
  const double f = average(c);
  const double s0 = slope(c);
  const double s1 = slope(c + 1);
  const double p = f - s0;
  const double q = f - s1;
  return t * (s0 + t * ((2.0 * p + q) + t * (-p - q)));
}

double PrimitiveView::partial_right(int c, double t) const {
  const double f = average(c);
  const double s0 = slope(c);
  const double s1 = slope(c + 1);
  const double p = f - s0;
  const double q = f - s1;
  return t * (s1 + t * ((p + 2.0 * q) + t * (-p - q)));
}

PrimitiveView::Foot PrimitiveView::foot(long base, double u) const {
  const double shift = std::floor(-u);
  Foot ft{base + static_cast<long>(shift), -u - shift};
  if (!periodic_) {
    const long n = cells();
    if (ft.cell < 0) ft = {0, 0.0};
    else if (ft.cell >= n) ft = {n, 0.0};
  }
  return ft;
}

double PrimitiveView::cumulative(long from, long to) const {
  double sum = 0.0;
  for (long k = from; k < to; ++k) sum += f_[wrap(static_cast<int>(k % cells()))];
  return sum;
}

double PrimitiveView::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  const int n = cells();
  if (periodic_) {
    const double shift = std::floor(a / n) * n;
    a -= shift;
    b -= shift;
  } else {
    a = std::clamp(a, 0.0, static_cast<double>(n));
    b = std::clamp(b, 0.0, static_cast<double>(n));
  }
  const long ca = static_cast<long>(std::floor(a));
  const long cb = static_cast<long>(std::floor(b));
  const double ta = a - ca;
  const double tb = b - cb;
  const double ia = ta == 0.0 ? 0.0 : partial_left(static_cast<int>(ca), ta);
  const double ib = tb == 0.0 ? 0.0 : partial_left(static_cast<int>(cb), tb);
  return cumulative(ca, cb) + (ib - ia);
}

double PrimitiveView::remap_cell(int i, double u_left, double u_right) const {
  const Foot a = foot(i, u_left);
  const Foot b = foot(i + 1, u_right);
  if (b.cell < a.cell || (b.cell == a.cell && b.t < a.t)) {
    throw NumericalError("characteristic feet cross in cell " + std::to_string(i));
  }
  const double ia = a.t == 0.0 ? 0.0 : partial_left(static_cast<int>(a.cell), a.t);
  const double ib = b.t == 0.0 ? 0.0 : partial_left(static_cast<int>(b.cell), b.t);
  return cumulative(a.cell, b.cell) + (ib - ia);
}

double PrimitiveView::swept(int face, double u) const {
  if (u == 0.0) return 0.0;
  const int n = cells();
  if (u > 0.0) {
    if (!periodic_ && u >= face) return cumulative(0, face);
    const double whole = std::floor(u);
    const long m = static_cast<long>(whole);
    const double r = u - whole;
    double sum = cumulative(face - m, face);
    if (r > 0.0) sum += partial_right(static_cast<int>(face - m - 1), r);
    return sum;
  }
  double w = -u;
  if (!periodic_ && face + w >= n) return -cumulative(face, n);
  const double whole = std::floor(w);
  const long m = static_cast<long>(whole);
  const double r = w - whole;
  double sum = cumulative(face, face + m);
  if (r > 0.0) sum += partial_left(static_cast<int>(face + m), r);
  return -sum;
}

PrimitiveSpline::PrimitiveSpline(std::span<const double> averages, const Axis& axis)
    : f_(averages.begin(), averages.end()), axis_(axis) {
  if (static_cast<int>(f_.size()) != axis.size()) {
    throw std::invalid_argument("average count does not match axis");
  }
  const int knots = axis.periodic() ? axis.size() : axis.size() + 1;
  const SlopeSolver solver(knots, axis.periodic() ? EndCondition::Periodic : EndCondition::Natural);
  s_ = primitive_slopes(f_, solver);
}

double PrimitiveSpline::eval(double z) const {
  return axis_.step() * view().integral(0.0, axis_.to_cell(z));
}

PrimitiveSpline primitive_spline(std::span<const double> averages, const Axis& axis) {
  return PrimitiveSpline(averages, axis);
}

double eval_primitive(const PrimitiveSpline& p, double z) { return p.eval(z); }

}  // namespace vpsm
