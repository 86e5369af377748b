#include "vpsm/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace vpsm {

Axis::Axis(int n_cells, double min, double max, Boundary bc)
    : n_(n_cells), lo_(min), hi_(max), bc_(bc) {
  if (n_cells < 4) {
    throw std::invalid_argument("axis needs at least 4 cells for cubic splines, got " +
                                std::to_string(n_cells));
  }
  if (!(max > min) || !std::isfinite(min) || !std::isfinite(max)) {
    throw std::invalid_argument("axis bounds must satisfy min < max");
  }
  dx_ = (hi_ - lo_) / n_;
}

PolarGrid::PolarGrid(const Axis& r, const Axis& theta) : r_(r), theta_(theta) {
  if (r.lo() <= 0.0) {
    throw std::invalid_argument("r_min must be positive (Jacobian J = r vanishes)");
  }
  if (r.periodic()) throw std::invalid_argument("r axis must be Neumann");
  if (!theta.periodic()) throw std::invalid_argument("theta axis must be periodic");
}

double PolarGrid::cell_volume(int i) const {
  if (i < 0 || i >= r_.size()) throw std::out_of_range("radial cell index out of range");
  return r_.center(i) * r_.step() * theta_.step();
}

PhaseGrid4D::PhaseGrid4D(const Axis& r, const Axis& theta, const Axis& z, const Axis& v)
    : polar_(r, theta), z_(z), v_(v) {
  if (!z.periodic()) throw std::invalid_argument("z axis must be periodic");
  if (v.periodic()) throw std::invalid_argument("v_par axis must be Neumann");
}

PhaseGrid4D build_grid(const AxisSpec& r, const AxisSpec& theta, const AxisSpec& z,
                       const AxisSpec& v) {
  AxisSpec rs = r, ts = theta, zs = z, vs = v;
  rs.bc = Boundary::Neumann;
  ts.bc = Boundary::Periodic;
  zs.bc = Boundary::Periodic;
  vs.bc = Boundary::Neumann;
  return PhaseGrid4D(Axis(rs), Axis(ts), Axis(zs), Axis(vs));
}

double cell_volume(int i, const PolarGrid& grid) { return grid.cell_volume(i); }

const char* to_string(Boundary bc) {
  return bc == Boundary::Periodic ? "periodic" : "neumann";
}

}  // namespace vpsm
