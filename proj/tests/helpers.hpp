#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "vpsm/field.hpp"
#include "vpsm/mesh.hpp"

namespace testing_support {

inline constexpr double kPi = std::numbers::pi;

inline vpsm::PhaseGrid4D small_grid(int nr, int nt, int nz = 4, int nv = 4,
                                    double rmin = 1.0, double rmax = 9.0) {
  return vpsm::build_grid({nr, rmin, rmax}, {nt, 0.0, 2.0 * kPi}, {nz, 0.0, 100.0},
                          {nv, -3.0, 3.0});
}

/// Random corner potential, zero on the radial walls.
inline vpsm::NodalPotential random_potential(const vpsm::PhaseGrid4D& g, std::mt19937_64& rng,
                                             double amp = 1.0) {
  std::uniform_real_distribution<double> d(-amp, amp);
  vpsm::NodalPotential phi(g.nr(), g.ntheta(), g.nz());
  for (int i = 1; i < g.nr(); ++i) {
    for (int j = 0; j < g.ntheta(); ++j) {
      for (int k = 0; k < g.nz(); ++k) phi(i, j, k) = d(rng);
    }
  }
  return phi;
}

/// Smooth corner potential vanishing on the radial walls.
inline vpsm::NodalPotential smooth_potential(const vpsm::PhaseGrid4D& g, double amp, int m,
                                             double phase = 0.0) {
  vpsm::NodalPotential phi(g.nr(), g.ntheta(), g.nz());
  const double r0 = g.r().lo(), len = g.r().length();
  for (int i = 0; i <= g.nr(); ++i) {
    const double s = std::sin(kPi * (g.r().node(i) - r0) / len);
    for (int j = 0; j < g.ntheta(); ++j) {
      const double th = g.theta().node(j);
      for (int k = 0; k < g.nz(); ++k) {
        const double z = g.z().center(k);
        phi(i, j, k) = amp * s * s *
                       (std::cos(m * th + phase) + 0.5 * std::sin((m + 1) * th) +
                        0.25 * std::cos(2.0 * kPi * z / g.z().length()));
      }
    }
  }
  return phi;
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace testing_support
