#pragma once

#include <cstddef>
#include <string>

namespace vpsm {

enum class Boundary { Periodic, Neumann };

struct AxisSpec {
  int n_cells = 0;
  double min = 0.0;
  double max = 1.0;
  Boundary bc = Boundary::Periodic;
};

/// Uniform 1D axis. Nodes x_{i+1/2} are indexed 0..n, cell centers 0..n-1.
class Axis {
 public:
  Axis() = default;
  Axis(int n_cells, double min, double max, Boundary bc);
  explicit Axis(const AxisSpec& s) : Axis(s.n_cells, s.min, s.max, s.bc) {}

  int size() const { return n_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double step() const { return dx_; }
  double length() const { return hi_ - lo_; }
  Boundary bc() const { return bc_; }
  bool periodic() const { return bc_ == Boundary::Periodic; }

  double node(int i) const { return i == n_ ? hi_ : lo_ + i * dx_; }
  double center(int i) const { return 0.5 * (node(i) + node(i + 1)); }

  /// Continuous cell coordinate: 0 at the first node, n at the last.
  double to_cell(double x) const { return (x - lo_) / dx_; }
  double from_cell(double xi) const { return lo_ + xi * dx_; }

 private:
  int n_ = 0;
  double lo_ = 0.0;
  double hi_ = 1.0;
  double dx_ = 1.0;
  Boundary bc_ = Boundary::Periodic;
};

/// (r, theta) polar plane with Jacobian J = r.
class PolarGrid {
 public:
  PolarGrid() = default;
  PolarGrid(const Axis& r, const Axis& theta);

  const Axis& r() const { return r_; }
  const Axis& theta() const { return theta_; }
  int nr() const { return r_.size(); }
  int ntheta() const { return theta_.size(); }

  /// Vol_{i,j} = r_i dr dtheta (independent of j).
  double cell_volume(int i) const;
  /// A^r_{i+-1/2,j} = dtheta.
  double r_face_area() const { return theta_.step(); }
  /// A^theta_{i,j+-1/2} = dr.
  double theta_face_area() const { return r_.step(); }
  double jacobian(double r) const { return r; }

 private:
  Axis r_;
  Axis theta_;
};

/// The (r, theta, z, v_par) phase-space grid.
class PhaseGrid4D {
 public:
  PhaseGrid4D() = default;
  PhaseGrid4D(const Axis& r, const Axis& theta, const Axis& z, const Axis& v);

  const PolarGrid& polar() const { return polar_; }
  const Axis& r() const { return polar_.r(); }
  const Axis& theta() const { return polar_.theta(); }
  const Axis& z() const { return z_; }
  const Axis& v() const { return v_; }

  int nr() const { return r().size(); }
  int ntheta() const { return theta().size(); }
  int nz() const { return z_.size(); }
  int nv() const { return v_.size(); }
  std::size_t cells() const {
    return static_cast<std::size_t>(nr()) * ntheta() * nz() * nv();
  }

  double cell_volume(int i) const { return polar_.cell_volume(i); }
  /// Full phase-space cell measure r_i dr dtheta dz dv.
  double phase_volume(int i) const { return cell_volume(i) * z_.step() * v_.step(); }

 private:
  PolarGrid polar_;
  Axis z_;
  Axis v_;
};

/// Validating constructor for the benchmark grid: theta and z periodic,
/// r and v_par Neumann, r_min > 0, at least 4 cells per axis.
PhaseGrid4D build_grid(const AxisSpec& r, const AxisSpec& theta, const AxisSpec& z,
                       const AxisSpec& v);

double cell_volume(int i, const PolarGrid& grid);

const char* to_string(Boundary bc);

}  // namespace vpsm
