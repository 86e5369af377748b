#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "vpsm/field.hpp"

using namespace vpsm;
using namespace testing_support;

namespace {

PhysicalParams unit_params() {
  PhysicalParams p;
  p.n0 = {0.055, 2.88, 5.0};
  p.Ti = {0.27586, 1.44, 5.0};
  p.Te = {0.27586, 1.44, 5.0};
  return p;
}

std::vector<double> profile_cells(const Axis& r, const RadialProfile& prof) {
  std::vector<double> v(r.size());
  for (int i = 0; i < r.size(); ++i) v[i] = prof(r.center(i));
  return v;
}

}  // namespace

TEST_SUITE("field") {
  TEST_CASE("rigid rotation potential") {
    const auto g = small_grid(16, 32);
    PhysicalParams p = unit_params();
    p.B = 2.0;
    NodalPotential phi(16, 32, 4);
    for (int i = 0; i <= 16; ++i) {
      const double r = g.r().node(i);
      for (int j = 0; j < 32; ++j) {
        for (int k = 0; k < 4; ++k) phi(i, j, k) = p.B * r * r / 2.0;
      }
    }
    const FaceVelocity a = velocity_from_potential(phi, g, p);
    for (double v : a.a_r) CHECK(v == 0.0);
    for (double v : a.a_theta) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    for (double v : a.a_v) CHECK(v == 0.0);
  }

  TEST_CASE("constant potential gives no drift") {
    const auto g = small_grid(8, 16);
    NodalPotential phi(8, 16, 4);
    for (double& v : phi.phi) v = 3.7;
    const FaceVelocity a = velocity_from_potential(phi, g, unit_params());
    CHECK(max_abs(a.a_r) == 0.0);
    CHECK(max_abs(a.a_theta) == 0.0);
    CHECK(max_abs(a.a_v) == 0.0);
  }

  TEST_CASE("discrete divergence vanishes for potential velocities") {
    const auto g = small_grid(32, 64);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
      const auto phi = random_potential(g, rng);
      const FaceVelocity a = velocity_from_potential(phi, g, unit_params());
      const auto div = discrete_divergence(a, g.polar());
      const double scale = std::max(max_abs(a.a_r), max_abs(a.a_theta)) / g.r().step();
      CHECK(max_abs(div) <= 1e-13 * scale);
    }
  }

  TEST_CASE("divergence of r a_r = const is zero") {
    const auto g = small_grid(10, 12);
    FaceVelocity a(10, 12, 4);
    for (int i = 0; i <= 10; ++i) {
      for (int j = 0; j < 12; ++j) {
        for (int k = 0; k < 4; ++k) a.a_r[a.r_index(i, j, k)] = 1.0 / g.r().node(i);
      }
    }
    CHECK(max_abs(discrete_divergence(a, g.polar())) <= 1e-15);
  }

  TEST_CASE("spline-differentiated velocities are not divergence free") {
    const auto g = small_grid(32, 64);
    const auto phi = smooth_potential(g, 1.0, 3);
    const auto a = spline_velocity_from_potential(phi, g, unit_params());
    CHECK(max_abs(discrete_divergence(a, g.polar())) > 1e-6);
  }

  TEST_CASE("parallel field by centred z differences") {
    const auto g = small_grid(6, 8, 8);
    PhysicalParams p = unit_params();
    p.charge = 2.0;
    NodalPotential phi(6, 8, 8);
    const double L = g.z().length();
    for (int i = 0; i <= 6; ++i) {
      for (int j = 0; j < 8; ++j) {
        for (int k = 0; k < 8; ++k) phi(i, j, k) = std::cos(2.0 * kPi * g.z().center(k) / L);
      }
    }
    const auto a = velocity_from_potential(phi, g, p);
    for (int k = 0; k < 8; ++k) {
      const double zp = g.z().center((k + 1) % 8), zm = g.z().center((k + 7) % 8);
      const double dz = g.z().step();
      const double expected =
          -2.0 * (std::cos(2.0 * kPi * zp / L) - std::cos(2.0 * kPi * zm / L)) / (2.0 * dz);
      CHECK(a.av(2, 3, k) == doctest::Approx(expected).epsilon(1e-12).scale(1e-3));
    }
  }

  TEST_CASE("equilibrium density gives zero potential") {
    const auto g = small_grid(12, 16, 4);
    const PhysicalParams p = unit_params();
    const auto n0 = profile_cells(g.r(), p.n0);
    const QuasiNeutralSolver qn(g, p, n0);
    std::vector<double> dens(static_cast<std::size_t>(12) * 16 * 4);
    for (int i = 0; i < 12; ++i) {
      for (int q = 0; q < 16 * 4; ++q) dens[i * 64 + q] = n0[i];
    }
    const auto phi = qn.solve(dens);
    CHECK(max_abs(phi.phi) == 0.0);
  }

  TEST_CASE("manufactured potential is recovered") {
    const auto g = small_grid(24, 32, 8);
    const PhysicalParams p = unit_params();
    const QuasiNeutralSolver qn(g, p, profile_cells(g.r(), p.n0));
    const auto exact = smooth_potential(g, 0.3, 4, 0.2);
    const auto rhs = qn.apply(exact);
    const auto phi = qn.solve_corners(rhs);
    CHECK(max_abs_diff(phi.phi, exact.phi) <= 1e-10 * max_abs(exact.phi));

    std::mt19937_64 rng(2);
    const auto rnd = random_potential(g, rng);
    const auto sol = qn.solve_corners(rnd);
    const auto back = qn.apply(sol);
    CHECK(max_abs_diff(back.phi, rnd.phi) <= 1e-10 * max_abs(rnd.phi));
  }

  TEST_CASE("single harmonic source stays a single harmonic") {
    const int nr = 20, nt = 32, nz = 8, m = 3, n = 1;
    const auto g = small_grid(nr, nt, nz);
    const PhysicalParams p = unit_params();
    const auto n0 = profile_cells(g.r(), p.n0);
    const QuasiNeutralSolver qn(g, p, n0);
    const double L = g.z().length();
    NodalPotential rhs(nr, nt, nz);
    std::vector<double> chi(nr + 1, 0.0);
    for (int i = 1; i < nr; ++i) {
      chi[i] = std::exp(-std::pow(g.r().node(i) - 5.0, 2));
      for (int j = 0; j < nt; ++j) {
        for (int k = 0; k < nz; ++k) {
          rhs(i, j, k) =
              chi[i] * std::cos(m * g.theta().node(j) + 2.0 * kPi * n * g.z().center(k) / L);
        }
      }
    }
    const auto phi = qn.solve_corners(rhs);

    // Oracle: the radial two-point problem of this mode, assembled from the
    // continuous operator and solved by dense Gaussian elimination.
    const double dr = g.r().step(), dth = g.theta().step();
    const int M = nr - 1;
    std::vector<std::vector<double>> A(M, std::vector<double>(M + 1, 0.0));
    const double lam = (2.0 - 2.0 * std::cos(2.0 * kPi * m / nt)) / (dth * dth);
    for (int i = 1; i < nr; ++i) {
      const double rho = g.r().node(i);
      const double Dl = g.r().center(i - 1) * n0[i - 1], Du = g.r().center(i) * n0[i];
      const double nn = 0.5 * (n0[i - 1] + n0[i]);
      const int row = i - 1;
      if (row > 0) A[row][row - 1] = -Dl / (rho * dr * dr);
      if (row + 1 < M) A[row][row + 1] = -Du / (rho * dr * dr);
      A[row][row] = (Dl + Du) / (rho * dr * dr) + nn * lam / (rho * rho) + nn / p.Te(rho);
      A[row][M] = chi[i];
    }
    for (int c = 0; c < M; ++c) {
      for (int r = c + 1; r < M; ++r) {
        const double f = A[r][c] / A[c][c];
        for (int q = c; q <= M; ++q) A[r][q] -= f * A[c][q];
      }
    }
    std::vector<double> amp(M);
    for (int r = M - 1; r >= 0; --r) {
      double s = A[r][M];
      for (int q = r + 1; q < M; ++q) s -= A[r][q] * amp[q];
      amp[r] = s / A[r][r];
    }
    double err = 0.0, ref = 0.0;
    for (int i = 1; i < nr; ++i) {
      for (int j = 0; j < nt; ++j) {
        for (int k = 0; k < nz; ++k) {
          const double e =
              amp[i - 1] * std::cos(m * g.theta().node(j) + 2.0 * kPi * n * g.z().center(k) / L);
          err = std::max(err, std::fabs(phi(i, j, k) - e));
          ref = std::max(ref, std::fabs(e));
        }
      }
    }
    CHECK(err <= 1e-12 * ref);
  }

  TEST_CASE("density moment") {
    const auto g = small_grid(4, 4, 4, 8);
    std::vector<double> f(g.cells(), 0.5);
    const auto n = density_moment(f, g);
    CHECK(n.size() == 64u);
    for (double v : n) CHECK(v == doctest::Approx(0.5 * 6.0).epsilon(1e-15));
  }

  TEST_CASE("parameter validation") {
    const auto g = small_grid(4, 4);
    PhysicalParams p = unit_params();
    CHECK_NOTHROW(validate(p, g.r()));
    p.B = 0.0;
    CHECK_THROWS(validate(p, g.r()));
  }
}
