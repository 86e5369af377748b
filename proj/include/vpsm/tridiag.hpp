#pragma once

#include <span>
#include <vector>

#include "vpsm/kernels.hpp"

namespace vpsm {

/// End conditions of a uniform cubic spline written in Hermite (slope) form.
enum class EndCondition {
  Periodic,          // cyclic system, knot N wraps to knot 0
  Natural,           // zero second derivative at both end knots
  ClampedZeroSlope,  // zero first derivative at both end knots
};

/// Factorized slope system of a uniform C2 cubic spline on N knots:
///   s_{k-1} + 4 s_k + s_{k+1} = rhs_k
/// with end rows set by the end condition. Thomas elimination; the cyclic
/// case uses a Sherman-Morrison correction with a precomputed vector.
class SlopeSolver {
 public:
  SlopeSolver() = default;
  SlopeSolver(int n_knots, EndCondition ec);

  int size() const { return n_; }
  EndCondition end_condition() const { return ec_; }

  /// Solve one system in place.
  void solve(std::span<double> x) const;
  /// Solve kernels::kLanes interleaved systems in place with the active kernel.
  void solve4(double* interleaved) const;

  kernels::TridiagFactors factors() const;

  /// Matrix-vector product with the (unmodified) spline matrix; used by tests.
  std::vector<double> apply(std::span<const double> x) const;

 private:
  void factor(const std::vector<double>& a, const std::vector<double>& b,
              const std::vector<double>& c);
  void solve_modified(double* x) const;

  int n_ = 0;
  EndCondition ec_ = EndCondition::Periodic;
  std::vector<double> lower_, upper_, inv_pivot_, z_;
  double w_last_ = 0.0;
  double inv_denom_ = 0.0;
};

/// Solve a general tridiagonal system (Thomas, no pivoting) in place.
/// lower[0] and upper[n-1] are ignored.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

}  // namespace vpsm
