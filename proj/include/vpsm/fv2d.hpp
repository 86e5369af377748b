#pragma once

#include <span>
#include <vector>

#include "vpsm/advect1d.hpp"
#include "vpsm/field.hpp"
#include "vpsm/mesh.hpp"

namespace vpsm {

/// Face velocities of one (r, theta) plane.
///   a_r: (nr + 1) x ntheta, index i ntheta + j (r-node i, theta-centre j)
///   a_theta: nr x ntheta, index i ntheta + j (r-centre i, theta-node j)
struct PlaneVelocity {
  int nr = 0;
  int ntheta = 0;
  std::vector<double> a_r;
  std::vector<double> a_theta;
};

PlaneVelocity plane_velocity(const FaceVelocity& a, int k);

/// Face displacements of a plane exceed one cell.
void check_plane_cfl(const PlaneVelocity& a, const PolarGrid& grid, double dt);

/// Unsplit finite-volume PSM update of cell averages f (nr x ntheta).
std::vector<double> fv_update_unsplit(std::span<const double> f, const PlaneVelocity& a,
                                      const PolarGrid& grid, double dt,
                                      const LimiterConfig& lim = {});

/// The r sub-step then the theta sub-step, both with fluxes from f.
std::vector<double> fv_update_split(std::span<const double> f, const PlaneVelocity& a,
                                    const PolarGrid& grid, double dt,
                                    const LimiterConfig& lim = {});

/// delta Vol^r_{i+1/2} - delta Vol^r_{i-1/2} + delta Vol^th_{j+1/2} - delta Vol^th_{j-1/2}.
std::vector<double> swept_volume_residual(const PlaneVelocity& a, const PolarGrid& grid,
                                          double dt);

/// Reusable plane solver (one per worker thread).
class FvPlane {
 public:
  explicit FvPlane(const PolarGrid& grid);

  /// Swept masses (cell units) of every r face (nr + 1) x ntheta and every
  /// theta face nr x (ntheta + 1), from f.
  void fluxes(std::span<const double> f, const PlaneVelocity& a, double dt,
              const LimiterConfig& lim);

  void update_unsplit(std::span<const double> f, std::span<double> out) const;
  void update_split(std::span<const double> f, std::span<double> out) const;

  /// Largest swept mass through the r walls (zero for wall velocities).
  double wall_flux() const;

 private:
  const PolarGrid& grid_;
  LineAdvector r_line_;
  LineAdvector t_line_;
  LineWorkspace ws_;
  std::vector<double> fline_, uline_;
  std::vector<double> sr_, st_;
};

}  // namespace vpsm
