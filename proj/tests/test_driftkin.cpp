#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "vpsm/diag.hpp"
#include "vpsm/driftkin.hpp"
#include "vpsm/error.hpp"
#include "vpsm/kernels.hpp"

using namespace vpsm;
using namespace testing_support;

namespace {

BenchmarkGrid tiny_grid() {
  BenchmarkGrid g;
  g.nr = 12;
  g.ntheta = 32;
  g.nz = 8;
  g.nv = 8;
  return g;
}

BenchmarkSpec tiny_spec(double eps) {
  BenchmarkSpec s;
  s.m = 4;
  s.n = 1;
  s.epsilon = eps;
  return s;
}

const SchemeConfig kVariants[] = {
    {Scheme::BSL, Form::DirectionalSplit, 5.0}, {Scheme::PSM, Form::DirectionalSplit, 5.0},
    {Scheme::PSM, Form::FiniteVolume, 5.0},     {Scheme::SLS, Form::DirectionalSplit, 5.0},
    {Scheme::SLS, Form::FiniteVolume, 5.0},
};

/// Velocities of a z-independent potential: a_v = 0.
FaceVelocity planar_velocity(const PhaseGrid4D& g, double amp) {
  NodalPotential phi(g.nr(), g.ntheta(), g.nz());
  const double r0 = g.r().lo(), len = g.r().length();
  for (int i = 0; i <= g.nr(); ++i) {
    const double s = std::sin(kPi * (g.r().node(i) - r0) / len);
    for (int j = 0; j < g.ntheta(); ++j) {
      const double th = g.theta().node(j);
      for (int k = 0; k < g.nz(); ++k) {
        phi(i, j, k) = amp * s * s * (std::cos(3.0 * th) + 0.5 * std::sin(2.0 * th + 0.3));
      }
    }
  }
  PhysicalParams p;
  return velocity_from_potential(phi, g, p);
}

}  // namespace

TEST_SUITE("driftkin") {
  TEST_CASE("scheme configuration") {
    CHECK_THROWS_AS(validate(SchemeConfig{Scheme::BSL, Form::FiniteVolume, 5.0}), ConfigError);
    CHECK_NOTHROW(validate(SchemeConfig{Scheme::BSL, Form::DirectionalSplit, 5.0}));
    CHECK_THROWS_AS(validate(SchemeConfig{Scheme::SLS, Form::FiniteVolume, 0.0}), ConfigError);
    CHECK(parse_scheme("sls") == Scheme::SLS);
    CHECK(parse_form("split") == Form::DirectionalSplit);
    CHECK_THROWS_AS(parse_scheme("weno"), ConfigError);
  }

  TEST_CASE("benchmark validation") {
    const auto g = tiny_grid().build();
    BenchmarkSpec s = tiny_spec(1e-4);
    CHECK_NOTHROW(validate(s, g));
    s.m = 5;  // 32 < 8 * 5
    CHECK_THROWS_AS(validate(s, g), ConfigError);
    s = tiny_spec(1e-4);
    s.cfl.dt_max = 0.0;
    CHECK_THROWS_AS(validate(s, g), ConfigError);
  }

  TEST_CASE("time step from the CFL rule") {
    const auto g = build_grid({8, 1.0, 1.8, Boundary::Neumann}, {16, 0.0, 2.0 * kPi},
                              {8, 0.0, 1e6}, {4, -1.0, 1.0, Boundary::Neumann});
    CflConfig cfl;
    cfl.dt_max = 1e3;
    FaceVelocity a(8, 16, 8);
    a.a_r[5] = 1.0;
    a.a_theta[3] = 0.5;  // 0.5 * dtheta / 0.5 = 0.39 > 0.05
    CHECK(compute_dt(a, g, cfl) == doctest::Approx(0.05).epsilon(1e-14));
    for (double& x : a.a_r) x *= 2.0;
    for (double& x : a.a_theta) x *= 2.0;
    CHECK(compute_dt(a, g, cfl) == doctest::Approx(0.025).epsilon(1e-14));
    const FaceVelocity zero(8, 16, 8);
    cfl.dt_max = 3.0;
    CHECK(compute_dt(zero, g, cfl) == 3.0);
  }

  TEST_CASE("initial distribution") {
    const auto g = tiny_grid().build();
    const auto eq = init_distribution(tiny_spec(0.0), g);
    for (int i = 0; i < g.nr(); ++i) {
      for (int l = 0; l < g.nv(); ++l) {
        const double ref = eq.f[index4(g, i, 0, 0, l)];
        for (int j = 0; j < g.ntheta(); ++j) {
          for (int k = 0; k < g.nz(); ++k) CHECK(eq.f[index4(g, i, j, k, l)] == ref);
        }
      }
    }
    const auto pert = init_distribution(tiny_spec(1e-2), g);
    double worst = 0.0;
    for (int i = 0; i < g.nr(); ++i) {
      for (int k = 0; k < g.nz(); ++k) {
        for (int l = 0; l < g.nv(); ++l) {
          double s = 0.0;
          for (int j = 0; j < g.ntheta(); ++j) {
            s += pert.f[index4(g, i, j, k, l)] - eq.f[index4(g, i, j, k, l)];
          }
          worst = std::max(worst, std::fabs(s / g.ntheta()) / eq.f[index4(g, i, 0, 0, l)]);
        }
      }
    }
    CHECK(worst <= 1e-13);

    const auto n0 = calibrated_n0(tiny_spec(0.0), g);
    const auto dens = density_moment(eq.f, g);
    for (int i = 0; i < g.nr(); ++i) {
      for (int q = 0; q < g.ntheta() * g.nz(); ++q) {
        CHECK(dens[static_cast<std::size_t>(i) * g.ntheta() * g.nz() + q] == n0[i]);
      }
    }
  }

  TEST_CASE("equilibrium is a steady state for every variant") {
    const auto g = tiny_grid().build();
    for (const auto& sc : kVariants) {
      const std::string variant = std::string(to_string(sc.scheme)) + "-" + to_string(sc.form);
      CAPTURE(variant);
      DriftKineticSolver s(g, tiny_spec(0.0), sc);
      const auto f0 = s.state().f;
      for (int n = 0; n < 10; ++n) s.step();
      CHECK(max_abs_diff(s.state().f, f0) <= 1e-12 * max_abs(f0));
      if (sc.scheme == Scheme::BSL) {
        CHECK(max_abs(s.potential_n().phi) <= 1e-14);
      } else {
        CHECK(max_abs(s.potential_n().phi) == 0.0);
      }
    }
  }

  TEST_CASE("conservative variants keep the mass") {
    const auto g = tiny_grid().build();
    for (const auto& sc : kVariants) {
      const std::string variant = std::string(to_string(sc.scheme)) + "-" + to_string(sc.form);
      CAPTURE(variant);
      BenchmarkSpec spec = tiny_spec(0.2);
      spec.cfl.dt_max = 40.0;
      DriftKineticSolver s(g, spec, sc);
      double m = total_mass(s.state().f, g);
      for (int n = 0; n < 5; ++n) {
        s.step();
        const double next = total_mass(s.state().f, g);
        if (sc.scheme != Scheme::BSL) CHECK(std::fabs(next - m) <= 1e-12 * m);
        m = next;
      }
    }
  }

  TEST_CASE("zero drift sweeps are the identity") {
    const auto g = tiny_grid().build();
    const auto f0 = init_distribution(tiny_spec(0.3), g).f;
    const FaceVelocity zero(g.nr(), g.ntheta(), g.nz());
    for (const auto& sc : kVariants) {
      Transport tr(g, sc);
      auto f = f0;
      tr.sweep_v(f, zero, 3.0);
      tr.sweep_theta(f, zero, 3.0);
      tr.sweep_r(f, zero, 3.0);
      if (sc.form == Form::FiniteVolume) tr.sweep_plane(f, zero, 3.0);
      if (sc.scheme == Scheme::BSL) {
        CHECK(max_abs_diff(f, f0) <= 1e-15 * max_abs(f0));
      } else {
        CHECK(f == f0);
      }
    }
    // A z-independent state is also left alone by the parallel streaming.
    const auto eq = init_distribution(tiny_spec(0.0), g).f;
    Transport tr(g, {Scheme::PSM, Form::FiniteVolume, 5.0});
    std::vector<double> out(eq.size());
    tr.apply(eq, zero, 5.0, out);
    CHECK(out == eq);
  }

  TEST_CASE("constants: finite volume exact, splitting drifts") {
    const auto g = tiny_grid().build();
    const FaceVelocity a = planar_velocity(g, 0.5);
    CHECK(max_abs(a.a_v) == 0.0);
    CflConfig cfl;
    const double dt = compute_dt(a, g, cfl);
    std::vector<double> f(g.cells(), 1.5), out(g.cells());
    Transport fv(g, {Scheme::PSM, Form::FiniteVolume, 5.0});
    Transport ds(g, {Scheme::PSM, Form::DirectionalSplit, 5.0});
    auto fv_state = f, ds_state = f;
    for (int n = 0; n < 10; ++n) {
      fv.apply(fv_state, a, dt, out);
      fv_state.swap(out);
      ds.apply(ds_state, a, dt, out);
      ds_state.swap(out);
    }
    const double fv_drift = max_abs_diff(fv_state, f), ds_drift = max_abs_diff(ds_state, f);
    CHECK(fv_drift <= 1e-12 * 1.5);
    CHECK(ds_drift > 1e-8);
  }

  TEST_CASE("splitting error on constants is at least second order") {
    const auto g = tiny_grid().build();
    const FaceVelocity a = planar_velocity(g, 0.5);
    const double dt = compute_dt(a, g, CflConfig{});
    Transport ds(g, {Scheme::PSM, Form::DirectionalSplit, 5.0});
    const std::vector<double> f(g.cells(), 1.0);
    std::vector<double> out(g.cells());
    ds.apply(f, a, dt, out);
    const double e1 = max_abs_diff(out, f);
    ds.apply(f, a, 0.5 * dt, out);
    const double e2 = max_abs_diff(out, f);
    CAPTURE(e1);
    CAPTURE(e2);
    CHECK(e1 < 1e-3);
    CHECK(e1 >= 4.0 * e2);
  }

  TEST_CASE("line batching matches single lines") {
    // Line counts that are not multiples of the lane width.
    BenchmarkGrid bg;
    bg.nr = 5;
    bg.ntheta = 9;
    bg.nz = 5;
    bg.nv = 5;
    const auto g = bg.build();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> d(0.5, 1.5);
    std::vector<double> f(g.cells());
    for (double& x : f) x = d(rng);
    Transport tr(g, {Scheme::PSM, Form::DirectionalSplit, 5.0});
    auto swept = f;
    const double dt = 37.0;
    tr.sweep_z(swept, dt);

    const LineAdvector line(g.nz(), true);
    LineWorkspace ws;
    std::vector<double> in(g.nz()), u(g.nz() + 1), out(g.nz());
    for (int i = 0; i < g.nr(); ++i) {
      for (int j = 0; j < g.ntheta(); ++j) {
        for (int l = 0; l < g.nv(); ++l) {
          for (int k = 0; k < g.nz(); ++k) in[k] = f[index4(g, i, j, k, l)];
          std::fill(u.begin(), u.end(), dt * g.v().center(l) / g.z().step());
          line.advect(in, u, {}, out, ws);
          for (int k = 0; k < g.nz(); ++k) CHECK(swept[index4(g, i, j, k, l)] == out[k]);
        }
      }
    }
  }

  TEST_CASE("SIMD and scalar kernels give identical steps") {
    const auto* avx = kernels::avx2_table();
    if (avx == nullptr) return;
    const auto g = tiny_grid().build();
    const auto before = kernels::active().isa;
    for (Scheme sch : {Scheme::PSM, Scheme::SLS}) {
      std::vector<double> res[2];
      int slot = 0;
      for (auto isa : {kernels::Isa::Scalar, kernels::Isa::Avx2}) {
        REQUIRE(kernels::select(isa));
        BenchmarkSpec spec = tiny_spec(0.2);
        spec.cfl.dt_max = 40.0;
        DriftKineticSolver s(g, spec, {sch, Form::DirectionalSplit, 5.0});
        for (int n = 0; n < 3; ++n) s.step();
        res[slot++] = s.state().f;
      }
      CHECK(res[0] == res[1]);
    }
    kernels::select(before);
  }
}
