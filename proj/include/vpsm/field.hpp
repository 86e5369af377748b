#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "vpsm/mesh.hpp"

namespace vpsm {

/// exp(-kappa delta tanh((r - r_peak) / delta)), normalised to 1 at r_peak.
struct RadialProfile {
  double kappa = 0.0;
  double delta = 1.0;
  double r_peak = 0.0;
  double operator()(double r) const;
};

struct PhysicalParams {
  double B = 1.0;       // B_z
  double charge = 1.0;  // q_i
  double mass = 1.0;    // m_i
  double e = 1.0;
  double omega0 = 1.0;
  RadialProfile n0;
  RadialProfile Ti;
  RadialProfile Te;
};

void validate(const PhysicalParams& p, const Axis& r);

/// Scalar field on the (r, theta) corners of every z plane:
/// (nr + 1) x ntheta x nz values, index (i, j, k) -> (i ntheta + j) nz + k.
struct NodalPotential {
  int nr = 0;
  int ntheta = 0;
  int nz = 0;
  std::vector<double> phi;

  NodalPotential() = default;
  NodalPotential(int nr_cells, int ntheta_cells, int nz_cells)
      : nr(nr_cells), ntheta(ntheta_cells), nz(nz_cells),
        phi(static_cast<std::size_t>(nr_cells + 1) * ntheta_cells * nz_cells, 0.0) {}

  std::size_t index(int i, int j, int k) const {
    const int jj = j >= ntheta ? j - ntheta : (j < 0 ? j + ntheta : j);
    const int kk = k >= nz ? k - nz : (k < 0 ? k + nz : k);
    return (static_cast<std::size_t>(i) * ntheta + jj) * nz + kk;
  }
  double& operator()(int i, int j, int k) { return phi[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return phi[index(i, j, k)]; }
};

/// Face-centred advection velocities of the drift-kinetic model.
///   a_r(i, j, k):     r-node i, theta-centre j   ((nr + 1) x ntheta x nz)
///   a_theta(i, j, k): r-centre i, theta-node j   (nr x ntheta x nz)
///   a_v(i, j, k):     cell centre, (q/m) E_z     (nr x ntheta x nz)
/// a_z is the v_par coordinate itself and is not stored.
struct FaceVelocity {
  int nr = 0;
  int ntheta = 0;
  int nz = 0;
  std::vector<double> a_r;
  std::vector<double> a_theta;
  std::vector<double> a_v;

  FaceVelocity() = default;
  FaceVelocity(int nr_cells, int ntheta_cells, int nz_cells);

  std::size_t r_index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * ntheta + j) * nz + k;
  }
  std::size_t c_index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * ntheta + j) * nz + k;
  }
  double ar(int i, int j, int k) const { return a_r[r_index(i, j, k)]; }
  double atheta(int i, int j, int k) const { return a_theta[c_index(i, j, k)]; }
  double av(int i, int j, int k) const { return a_v[c_index(i, j, k)]; }
};

/// Velocities from corner potentials by the natural finite differences
/// that make the discrete polar divergence vanish identically.
FaceVelocity velocity_from_potential(const NodalPotential& phi, const PhaseGrid4D& grid,
                                     const PhysicalParams& params);

/// Same field with v_GC differentiated through cubic splines of Phi (radial
/// splines for a_theta, azimuthal for a_r). Not divergence free; kept as
/// the contrast case.
FaceVelocity spline_velocity_from_potential(const NodalPotential& phi, const PhaseGrid4D& grid,
                                            const PhysicalParams& params);

/// Per-cell discrete polar divergence, nr x ntheta x nz, same layout as a_v.
std::vector<double> discrete_divergence(const FaceVelocity& a, const PolarGrid& grid);

/// Reference density n0 on the radial cells (calibrated by the caller).
/// Cell-centre charge density minus n0, nr x ntheta x nz.
class QuasiNeutralSolver {
 public:
  QuasiNeutralSolver(const PhaseGrid4D& grid, const PhysicalParams& params,
                     std::vector<double> n0_cells);
  ~QuasiNeutralSolver();
  QuasiNeutralSolver(const QuasiNeutralSolver&) = delete;
  QuasiNeutralSolver& operator=(const QuasiNeutralSolver&) = delete;

  /// Potential from the ion density n_i (cell centres, nr x ntheta x nz).
  NodalPotential solve(std::span<const double> density) const;

  /// Potential from a right-hand side given on the corners (interior radial
  /// nodes carry the equation; nodes 0 and nr are Dirichlet).
  NodalPotential solve_corners(const NodalPotential& rhs) const;

  /// Discrete operator applied in physical space (test oracle).
  NodalPotential apply(const NodalPotential& phi) const;

  /// Corner average of n_i - n0.
  NodalPotential corner_rhs(std::span<const double> density) const;

  std::span<const double> n0_cells() const { return n0_; }

 private:
  struct Plans;

  const PhaseGrid4D& grid_;
  PhysicalParams params_;
  std::vector<double> n0_;
  // Radial coefficients at interior node i (index i - 1).
  std::vector<double> lower_, upper_, radial_diag_, perp_, adiabatic_;
  std::unique_ptr<Plans> plans_;
};

/// v_par integral of f (midpoint rule, fixed summation order): nr x ntheta x nz.
std::vector<double> density_moment(std::span<const double> f, const PhaseGrid4D& grid);

}  // namespace vpsm
