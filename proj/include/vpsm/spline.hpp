#pragma once

#include <span>
#include <vector>

#include "vpsm/mesh.hpp"
#include "vpsm/tridiag.hpp"

namespace vpsm {

// Cubic splines are stored in Hermite form: knot values plus knot slopes,
// both in knot units (unit spacing). Slopes are solved as s = sigma + delta,
// where sigma is the local centered estimate and delta solves the spline
// system with right-hand side b - A sigma. Constant and linear data give
// delta = 0 exactly, so they are reproduced without round-off.

/// Fill sigma and the residual right-hand side for an interpolating spline
/// of values y (one per knot).
void interpolation_system(std::span<const double> y, EndCondition ec, std::span<double> sigma,
                          std::span<double> rhs);

/// Same for the primitive of cell averages fbar: knots are the cell faces
/// (n+1 for Natural ends, n for Periodic).
void primitive_system(std::span<const double> fbar, EndCondition ec, std::span<double> sigma,
                      std::span<double> rhs);

/// Residual b - A sigma from a prepared sigma (interior rows b_k = 6 sigma_k).
void slope_residual(std::span<const double> sigma, EndCondition ec, std::span<double> rhs);

/// Slopes of an interpolating spline (knot units).
std::vector<double> interpolation_slopes(std::span<const double> y, const SlopeSolver& solver);
/// Slopes of the primitive spline (knot units, i.e. point values of f).
std::vector<double> primitive_slopes(std::span<const double> fbar, const SlopeSolver& solver);

/// Evaluation of a Hermite cubic on [k, k+1] at local coordinate t.
struct HermiteSegment {
  double y0, y1, s0, s1;
  double value(double t) const {
    const double d = y1 - y0;
    const double p = d - s0;
    const double q = d - s1;
    return y0 + t * (s0 + t * ((2.0 * p + q) + t * (-p - q)));
  }
  double derivative(double t) const {
    const double d = y1 - y0;
    const double p = d - s0;
    const double q = d - s1;
    return s0 + t * (2.0 * (2.0 * p + q) + 3.0 * t * (-p - q));
  }
  double second_derivative(double t) const {
    const double d = y1 - y0;
    const double p = d - s0;
    const double q = d - s1;
    return 2.0 * (2.0 * p + q) + 6.0 * t * (-p - q);
  }
};

/// Non-owning view of an interpolating spline on knots x0 + k h.
/// Periodic splines wrap the abscissa; others clamp it to the end knots
/// (constant extrapolation of the end value).
class SplineView {
 public:
  SplineView() = default;
  SplineView(std::span<const double> values, std::span<const double> slopes, bool periodic)
      : y_(values), s_(slopes), periodic_(periodic) {}

  int knots() const { return static_cast<int>(y_.size()); }
  /// Value at knot coordinate eta (knot k sits at eta = k).
  double at(double eta) const;
  double derivative_at(double eta) const;
  double second_derivative_at(double eta) const;

 private:
  HermiteSegment locate(double eta, double& t) const;

  std::span<const double> y_;
  std::span<const double> s_;
  bool periodic_ = false;
};

/// Where the values of an interpolating spline live on an axis.
enum class Placement { Centers, Nodes };

/// Owning interpolating spline on an axis. Periodic axes use the cyclic
/// system; Neumann axes use zero end slopes for cell-center data and
/// natural ends for node data.
class CubicSpline {
 public:
  CubicSpline(std::span<const double> values, const Axis& axis, Placement where);

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  std::span<const double> values() const { return y_; }
  std::span<const double> slopes() const { return s_; }
  EndCondition end_condition() const { return ec_; }
  SplineView view() const { return SplineView(y_, s_, ec_ == EndCondition::Periodic); }

 private:
  double knot_coord(double x) const { return (x - x0_) / h_; }

  std::vector<double> y_;
  std::vector<double> s_;
  EndCondition ec_;
  double x0_;
  double h_;
};

CubicSpline interpolating_spline(std::span<const double> values, const Axis& axis,
                                 Placement where);

/// Non-owning view of the spline reconstruction of the primitive
///   F(xi) = int_0^xi f,   xi in cell units,
/// whose knot values are the cumulative sums of the cell averages.
/// All integrals are returned in cell units (multiply by dx for mass).
class PrimitiveView {
 public:
  PrimitiveView() = default;
  PrimitiveView(std::span<const double> fbar, std::span<const double> slopes, bool periodic)
      : f_(fbar), s_(slopes), periodic_(periodic) {}

  int cells() const { return static_cast<int>(f_.size()); }
  bool periodic() const { return periodic_; }
  double average(int c) const { return f_[wrap(c)]; }
  double slope(int knot) const { return s_[periodic_ ? wrap(knot) : knot]; }

  /// int over cell c from its left face to left face + t (0 <= t <= 1).
  double partial_left(int c, double t) const;
  /// int over cell c from right face - t to its right face.
  double partial_right(int c, double t) const;

  /// int_{a}^{b} f for arbitrary a, b (wrapped or clamped to the domain).
  double integral(double a, double b) const;

  /// New average of cell i when its faces come from i - u_left and
  /// i + 1 - u_right (displacements in cells). Throws on crossing feet.
  double remap_cell(int i, double u_left, double u_right) const;

  /// Mass through face k swept by displacement u: int_{k-u}^{k} f.
  double swept(int face, double u) const;

 private:
  int wrap(int c) const {
    const int n = cells();
    int r = c % n;
    return r < 0 ? r + n : r;
  }
  struct Foot {
    long cell;
    double t;
  };
  Foot foot(long base, double u) const;
  double cumulative(long from, long to) const;

  std::span<const double> f_;
  std::span<const double> s_;
  bool periodic_ = false;
};

/// Owning primitive spline on an axis (Natural ends on Neumann axes, which
/// is F'' = f' = 0 at the walls; cyclic on periodic axes).
class PrimitiveSpline {
 public:
  PrimitiveSpline(std::span<const double> averages, const Axis& axis);

  /// F_h(z) - F_h(x_{1/2}) in physical units.
  double eval(double z) const;
  PrimitiveView view() const { return PrimitiveView(f_, s_, axis_.periodic()); }
  const Axis& axis() const { return axis_; }
  std::span<const double> slopes() const { return s_; }
  std::span<const double> averages() const { return f_; }

 private:
  std::vector<double> f_;
  std::vector<double> s_;
  Axis axis_;
};

PrimitiveSpline primitive_spline(std::span<const double> averages, const Axis& axis);
double eval_primitive(const PrimitiveSpline& p, double z);

}  // namespace vpsm
