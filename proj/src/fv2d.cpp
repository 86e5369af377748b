#include "vpsm/fv2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vpsm/error.hpp"

namespace vpsm {

PlaneVelocity plane_velocity(const FaceVelocity& a, int k) {
  PlaneVelocity p;
  p.nr = a.nr;
  p.ntheta = a.ntheta;
  p.a_r.resize(static_cast<std::size_t>(a.nr + 1) * a.ntheta);
  p.a_theta.resize(static_cast<std::size_t>(a.nr) * a.ntheta);
  for (int i = 0; i <= a.nr; ++i) {
    for (int j = 0; j < a.ntheta; ++j) p.a_r[i * a.ntheta + j] = a.ar(i, j, k);
  }
  for (int i = 0; i < a.nr; ++i) {
    for (int j = 0; j < a.ntheta; ++j) p.a_theta[i * a.ntheta + j] = a.atheta(i, j, k);
  }
  return p;
}

void check_plane_cfl(const PlaneVelocity& a, const PolarGrid& grid, double dt) {
  const double cr = dt / grid.r().step(), ct = dt / grid.theta().step();
  for (double v : a.a_r) {
    if (std::fabs(v) * cr > 1.0) {
      throw NumericalError("radial CFL violated: displacement " + std::to_string(v * cr));
    }
  }
  for (double v : a.a_theta) {
    if (std::fabs(v) * ct > 1.0) {
      throw NumericalError("azimuthal CFL violated: displacement " + std::to_string(v * ct));
    }
  }
}

FvPlane::FvPlane(const PolarGrid& grid)
    : grid_(grid), r_line_(grid.nr(), false), t_line_(grid.ntheta(), true) {}

void FvPlane::fluxes(std::span<const double> f, const PlaneVelocity& a, double dt,
                     const LimiterConfig& lim) {
  const int nr = grid_.nr(), nt = grid_.ntheta();
  if (a.nr != nr || a.ntheta != nt || f.size() != static_cast<std::size_t>(nr) * nt) {
    throw std::invalid_argument("plane data does not match the grid");
  }
  check_plane_cfl(a, grid_, dt);
  sr_.resize(static_cast<std::size_t>(nr + 1) * nt);
  st_.resize(static_cast<std::size_t>(nr) * (nt + 1));

  const double cr = dt / grid_.r().step();
  fline_.resize(std::max(nr, nt));
  uline_.resize(std::max(nr, nt) + 1);
  for (int j = 0; j < nt; ++j) {
    for (int i = 0; i < nr; ++i) fline_[i] = f[i * nt + j];
    for (int i = 0; i <= nr; ++i) uline_[i] = cr * a.a_r[i * nt + j];
    const std::span<const double> fl(fline_.data(), nr), ul(uline_.data(), nr + 1);
    r_line_.slopes(fl, ws_);
    r_line_.swept(fl, ul, ws_);
    if (lim.enabled) r_line_.limit(fl, ul, lim.K, ws_);
    for (int i = 0; i <= nr; ++i) sr_[i * nt + j] = ws_.swept[i];
  }

  const double ct = dt / grid_.theta().step();
  for (int i = 0; i < nr; ++i) {
    const std::span<const double> fl(f.data() + static_cast<std::size_t>(i) * nt, nt);
    for (int j = 0; j < nt; ++j) uline_[j] = ct * a.a_theta[i * nt + j];
    uline_[nt] = uline_[0];
    const std::span<const double> ul(uline_.data(), nt + 1);
    t_line_.slopes(fl, ws_);
    t_line_.swept(fl, ul, ws_);
    if (lim.enabled) t_line_.limit(fl, ul, lim.K, ws_);
    for (int j = 0; j <= nt; ++j) st_[i * (nt + 1) + j] = ws_.swept[j];
  }
}

void FvPlane::update_unsplit(std::span<const double> f, std::span<double> out) const {
  const int nr = grid_.nr(), nt = grid_.ntheta();
  for (int i = 0; i < nr; ++i) {
    const double rl = grid_.r().node(i), rr = grid_.r().node(i + 1);
    const double inv_rc = 1.0 / grid_.r().center(i);
    for (int j = 0; j < nt; ++j) {
      const double radial = (rl * sr_[i * nt + j] - rr * sr_[(i + 1) * nt + j]) * inv_rc;
      const double azim = st_[i * (nt + 1) + j] - st_[i * (nt + 1) + j + 1];
      out[i * nt + j] = f[i * nt + j] + (radial + azim);
    }
  }
}

void FvPlane::update_split(std::span<const double> f, std::span<double> out) const {
  const int nr = grid_.nr(), nt = grid_.ntheta();
  for (int i = 0; i < nr; ++i) {
    const double rl = grid_.r().node(i), rr = grid_.r().node(i + 1);
    const double inv_rc = 1.0 / grid_.r().center(i);
    for (int j = 0; j < nt; ++j) {
      out[i * nt + j] = f[i * nt + j] + (rl * sr_[i * nt + j] - rr * sr_[(i + 1) * nt + j]) * inv_rc;
    }
  }
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      out[i * nt + j] = out[i * nt + j] + (st_[i * (nt + 1) + j] - st_[i * (nt + 1) + j + 1]);
    }
  }
}

double FvPlane::wall_flux() const {
  const int nr = grid_.nr(), nt = grid_.ntheta();
  double m = 0.0;
  for (int j = 0; j < nt; ++j) {
    m = std::max({m, std::fabs(sr_[j]), std::fabs(sr_[nr * nt + j])});
  }
  return m;
}

std::vector<double> fv_update_unsplit(std::span<const double> f, const PlaneVelocity& a,
                                      const PolarGrid& grid, double dt, const LimiterConfig& lim) {
  FvPlane plane(grid);
  plane.fluxes(f, a, dt, lim);
  std::vector<double> out(f.size());
  plane.update_unsplit(f, out);
  return out;
}

std::vector<double> fv_update_split(std::span<const double> f, const PlaneVelocity& a,
                                    const PolarGrid& grid, double dt, const LimiterConfig& lim) {
  FvPlane plane(grid);
  plane.fluxes(f, a, dt, lim);
  std::vector<double> out(f.size());
  plane.update_split(f, out);
  return out;
}

std::vector<double> swept_volume_residual(const PlaneVelocity& a, const PolarGrid& grid,
                                          double dt) {
  const int nr = grid.nr(), nt = grid.ntheta();
  const double dr = grid.r().step(), dth = grid.theta().step();
  std::vector<double> res(static_cast<std::size_t>(nr) * nt);
  for (int i = 0; i < nr; ++i) {
    const double rl = grid.r().node(i), rr = grid.r().node(i + 1), rc = grid.r().center(i);
    for (int j = 0; j < nt; ++j) {
      const int jp = j + 1 == nt ? 0 : j + 1;
      const double dvr_out = rr * dth * (dt * a.a_r[(i + 1) * nt + j]);
      const double dvr_in = rl * dth * (dt * a.a_r[i * nt + j]);
      const double dvt_out = rc * dr * (dt * a.a_theta[i * nt + jp]);
      const double dvt_in = rc * dr * (dt * a.a_theta[i * nt + j]);
      res[i * nt + j] = (dvr_out - dvr_in) + (dvt_out - dvt_in);
    }
  }
  return res;
}

}  // namespace vpsm
