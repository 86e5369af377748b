#include "vpsm/tridiag.hpp"

#include <stdexcept>

#include "vpsm/error.hpp"

namespace vpsm {

SlopeSolver::SlopeSolver(int n_knots, EndCondition ec) : n_(n_knots), ec_(ec) {
  if (n_knots < 3) throw std::invalid_argument("spline needs at least 3 knots");
  std::vector<double> a(n_, 1.0), b(n_, 4.0), c(n_, 1.0);
  a[0] = 0.0;
  c[n_ - 1] = 0.0;
  switch (ec) {
    case EndCondition::Natural:
      b[0] = 2.0;
      b[n_ - 1] = 2.0;
      break;
    case EndCondition::ClampedZeroSlope:
      b[0] = 1.0;
      c[0] = 0.0;
      b[n_ - 1] = 1.0;
      a[n_ - 1] = 0.0;
      break;
    case EndCondition::Periodic: {
      // Corners A[0][n-1] = A[n-1][0] = 1 are moved into a rank-one update.
      const double gamma = -b[0];
      b[0] -= gamma;
      b[n_ - 1] -= 1.0 * 1.0 / gamma;
      factor(a, b, c);
      z_.assign(n_, 0.0);
      z_[0] = gamma;
      z_[n_ - 1] = 1.0;
      solve_modified(z_.data());
      w_last_ = 1.0 / gamma;
      inv_denom_ = 1.0 / (1.0 + z_[0] + w_last_ * z_[n_ - 1]);
      return;
    }
  }
  factor(a, b, c);
}

void SlopeSolver::factor(const std::vector<double>& a, const std::vector<double>& b,
                         const std::vector<double>& c) {
  lower_ = a;
  upper_.assign(n_, 0.0);
  inv_pivot_.assign(n_, 0.0);
  double pivot = b[0];
  inv_pivot_[0] = 1.0 / pivot;
  upper_[0] = c[0] * inv_pivot_[0];
  for (int k = 1; k < n_; ++k) {
    pivot = b[k] - a[k] * upper_[k - 1];
    if (pivot == 0.0) throw NumericalError("singular spline slope system");
    inv_pivot_[k] = 1.0 / pivot;
    upper_[k] = c[k] * inv_pivot_[k];
  }
}

void SlopeSolver::solve_modified(double* x) const {
  x[0] = x[0] * inv_pivot_[0];
  for (int k = 1; k < n_; ++k) x[k] = (x[k] - lower_[k] * x[k - 1]) * inv_pivot_[k];
  for (int k = n_ - 2; k >= 0; --k) x[k] = x[k] - upper_[k] * x[k + 1];
}

void SlopeSolver::solve(std::span<double> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("slope system size mismatch");
  solve_modified(x.data());
  if (!z_.empty()) {
    const double fact = (x[0] + w_last_ * x[n_ - 1]) * inv_denom_;
    for (int k = 0; k < n_; ++k) x[k] = x[k] - fact * z_[k];
  }
}

void SlopeSolver::solve4(double* interleaved) const {
  kernels::active().solve_tridiag4(factors(), interleaved);
}

kernels::TridiagFactors SlopeSolver::factors() const {
  kernels::TridiagFactors f;
  f.n = n_;
  f.lower = lower_.data();
  f.upper = upper_.data();
  f.inv_pivot = inv_pivot_.data();
  f.cyclic_z = z_.empty() ? nullptr : z_.data();
  f.cyclic_w_last = w_last_;
  f.cyclic_inv_denom = inv_denom_;
  return f;
}

std::vector<double> SlopeSolver::apply(std::span<const double> x) const {
  std::vector<double> y(n_);
  for (int k = 0; k < n_; ++k) {
    double diag = 4.0, off_l = 1.0, off_r = 1.0;
    if (ec_ == EndCondition::Natural && (k == 0 || k == n_ - 1)) diag = 2.0;
    if (ec_ == EndCondition::ClampedZeroSlope && (k == 0 || k == n_ - 1)) {
      y[k] = x[k];
      continue;
    }
    double left = 0.0, right = 0.0;
    if (k > 0) left = x[k - 1];
    else if (ec_ == EndCondition::Periodic) left = x[n_ - 1];
    else off_l = 0.0;
    if (k < n_ - 1) right = x[k + 1];
    else if (ec_ == EndCondition::Periodic) right = x[0];
    else off_r = 0.0;
    y[k] = off_l * left + diag * x[k] + off_r * right;
  }
  return y;
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw std::invalid_argument("tridiagonal system size mismatch");
  }
  if (n == 0) return;
  std::vector<double> cp(n);
  double pivot = diag[0];
  if (pivot == 0.0) throw NumericalError("zero pivot in tridiagonal solve");
  cp[0] = upper[0] / pivot;
  rhs[0] /= pivot;
  for (std::size_t k = 1; k < n; ++k) {
    pivot = diag[k] - lower[k] * cp[k - 1];
    if (pivot == 0.0) throw NumericalError("zero pivot in tridiagonal solve");
    cp[k] = k + 1 < n ? upper[k] / pivot : 0.0;
    rhs[k] = (rhs[k] - lower[k] * rhs[k - 1]) / pivot;
  }
  for (std::size_t k = n - 1; k-- > 0;) rhs[k] -= cp[k] * rhs[k + 1];
}

}  // namespace vpsm
