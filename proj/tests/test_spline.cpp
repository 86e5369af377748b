#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "vpsm/spline.hpp"

using namespace vpsm;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample(const Axis& ax, int count, double (*f)(double), bool centers) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = f(centers ? ax.center(i) : ax.node(i));
  return v;
}

// Exact cell averages of sin(2 pi x) on an axis.
std::vector<double> sine_averages(const Axis& ax, double shift = 0.0) {
  std::vector<double> v(ax.size());
  const double w = 2.0 * kPi;
  for (int i = 0; i < ax.size(); ++i) {
    v[i] = (std::cos(w * (ax.node(i) - shift)) - std::cos(w * (ax.node(i + 1) - shift))) /
           (w * ax.step());
  }
  return v;
}

// Centered cubic B-spline, support [-2, 2].
double bspline3(double x) {
  x = std::fabs(x);
  if (x < 1.0) return 2.0 / 3.0 - x * x + 0.5 * x * x * x;
  if (x < 2.0) return (2.0 - x) * (2.0 - x) * (2.0 - x) / 6.0;
  return 0.0;
}

// Amplification factor of a periodic cubic-spline shift by u cells for the
// Fourier mode exp(i kappa j), from the B-spline representation.
std::complex<double> spline_shift_symbol(double kappa, double u) {
  std::complex<double> num = 0.0;
  for (int m = -3; m <= 3; ++m) num += std::polar(1.0, -kappa * m) * bspline3(m - u);
  return num / ((2.0 + std::cos(kappa)) / 3.0);
}

double max_interp_error(int n) {
  const Axis ax(n, 0.0, 1.0, Boundary::Periodic);
  const auto y = sample(ax, n, [](double x) { return std::sin(2.0 * kPi * x); }, true);
  const CubicSpline s(y, ax, Placement::Centers);
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = ax.node(i);
    err = std::max(err, std::fabs(s(x) - std::sin(2.0 * kPi * x)));
  }
  return err;
}

}  // namespace

TEST_SUITE("spline") {
  TEST_CASE("interpolation property for every end condition") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (Boundary bc : {Boundary::Periodic, Boundary::Neumann}) {
      const Axis ax(19, -1.0, 3.0, bc);
      for (Placement pl : {Placement::Centers, Placement::Nodes}) {
        const int count = (pl == Placement::Nodes && bc == Boundary::Neumann) ? 20 : 19;
        std::vector<double> y(count);
        for (auto& v : y) v = d(rng);
        const CubicSpline s(y, ax, pl);
        for (int i = 0; i < count; ++i) {
          const double x = pl == Placement::Centers ? ax.center(i) : ax.node(i);
          CHECK(s(x) == doctest::Approx(y[i]).epsilon(1e-13));
        }
      }
    }
  }

  TEST_CASE("C2 continuity at interior knots") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (Boundary bc : {Boundary::Periodic, Boundary::Neumann}) {
      const Axis ax(24, 0.0, 1.0, bc);
      std::vector<double> y(24);
      for (auto& v : y) v = d(rng);
      const CubicSpline s(y, ax, Placement::Centers);
      const auto ys = s.values();
      const auto ss = s.slopes();
      const int last = bc == Boundary::Periodic ? 24 : 23;
      for (int k = 1; k < last; ++k) {
        const int kp = (k + 1) % 24;
        const HermiteSegment left{ys[k - 1], ys[k], ss[k - 1], ss[k]};
        const HermiteSegment right{ys[k], ys[kp], ss[k], ss[kp]};
        CHECK(left.value(1.0) == doctest::Approx(right.value(0.0)).epsilon(1e-12));
        CHECK(left.derivative(1.0) == doctest::Approx(right.derivative(0.0)).epsilon(1e-12));
        CHECK(left.second_derivative(1.0) ==
              doctest::Approx(right.second_derivative(0.0)).epsilon(1e-12).scale(1.0));
      }
      if (bc == Boundary::Neumann) {
        CHECK(ss[0] == 0.0);
        CHECK(ss[23] == 0.0);
      } else {
        // Periodic closure: the segment 23 -> 0 joins smoothly at both ends.
        const HermiteSegment wrap{ys[23], ys[0], ss[23], ss[0]};
        const HermiteSegment first{ys[0], ys[1], ss[0], ss[1]};
        CHECK(wrap.second_derivative(1.0) ==
              doctest::Approx(first.second_derivative(0.0)).epsilon(1e-12).scale(1.0));
      }
    }
  }

  TEST_CASE("constants and straight lines are reproduced") {
    const Axis ax(12, 2.0, 5.0, Boundary::Neumann);
    const std::vector<double> c(12, 3.25);
    const CubicSpline sc(c, ax, Placement::Centers);
    for (int k = 0; k <= 100; ++k) {
      const double x = 2.0 + 3.0 * k / 100.0;
      CHECK(std::fabs(sc(x) - 3.25) <= 1e-14);
    }
    // Natural ends reproduce linear data everywhere.
    const auto lin = sample(ax, 13, [](double x) { return 2.0 * x - 1.0; }, false);
    const CubicSpline sl(lin, ax, Placement::Nodes);
    for (int i = 0; i < 12; ++i) {
      CHECK(sl(ax.center(i)) == doctest::Approx(2.0 * ax.center(i) - 1.0).epsilon(1e-14));
    }
  }

  TEST_CASE("periodic splines converge at fourth order") {
    const double e32 = max_interp_error(32);
    const double e64 = max_interp_error(64);
    const double e128 = max_interp_error(128);
    const double p1 = std::log2(e32 / e64);
    const double p2 = std::log2(e64 / e128);
    CHECK(p1 >= 3.5);
    CHECK(p1 <= 4.5);
    CHECK(p2 >= 3.5);
    CHECK(p2 <= 4.5);
  }

  TEST_CASE("periodic evaluation wraps") {
    const Axis ax(16, 0.0, 2.0, Boundary::Periodic);
    const auto y = sample(ax, 16, [](double x) { return std::cos(kPi * x) + 0.3; }, true);
    const CubicSpline s(y, ax, Placement::Centers);
    for (double x : {0.01, 0.37, 1.2, 1.99}) {
      CHECK(s(x + 2.0) == doctest::Approx(s(x)).epsilon(1e-13));
      CHECK(s(x - 4.0) == doctest::Approx(s(x)).epsilon(1e-13));
    }
  }

  TEST_CASE("linearity of the spline operator") {
    const Axis ax(20, 0.0, 1.0, Boundary::Periodic);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> f(20), g(20), h(20);
    for (int i = 0; i < 20; ++i) {
      f[i] = d(rng);
      g[i] = d(rng);
      h[i] = 1.5 * f[i] - 0.5 * g[i];
    }
    const CubicSpline sf(f, ax, Placement::Centers), sg(g, ax, Placement::Centers),
        sh(h, ax, Placement::Centers);
    for (int k = 0; k < 50; ++k) {
      const double x = k / 50.0;
      CHECK(sh(x) == doctest::Approx(1.5 * sf(x) - 0.5 * sg(x)).epsilon(1e-13).scale(1.0));
    }
  }

  TEST_CASE("primitive knots are cumulative sums") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (Boundary bc : {Boundary::Periodic, Boundary::Neumann}) {
      const Axis ax(30, -1.0, 2.0, bc);
      std::vector<double> fb(30);
      for (auto& v : fb) v = d(rng);
      const PrimitiveSpline p(fb, ax);
      double cum = 0.0;
      for (int i = 0; i <= 30; ++i) {
        CHECK(p.view().integral(0.0, i) == cum);
        CHECK(p.eval(ax.node(i)) == doctest::Approx(cum * ax.step()).epsilon(1e-14));
        if (i < 30) {
          CHECK(p.eval(ax.node(i + 1)) - p.eval(ax.node(i)) ==
                doctest::Approx(fb[i] * ax.step()).epsilon(1e-12));
          cum += fb[i];
        }
      }
      if (bc == Boundary::Periodic) {
        // One full period carries the total mass.
        CHECK(p.view().integral(0.37, 30.37) == doctest::Approx(cum).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("primitive of a constant is linear") {
    const Axis ax(10, 1.0, 6.0, Boundary::Neumann);
    const std::vector<double> c(10, 0.75);
    const PrimitiveSpline p(c, ax);
    for (int k = 0; k <= 40; ++k) {
      const double z = 1.0 + 5.0 * k / 40.0;
      CHECK(std::fabs(eval_primitive(p, z) - 0.75 * (z - 1.0)) <= 1e-14);
    }
  }

  TEST_CASE("remap of a single unit mass conserves it") {
    const Axis ax(40, 0.0, 4.0, Boundary::Periodic);
    std::vector<double> fb(40, 0.0);
    fb[17] = 1.0 / ax.step();
    const PrimitiveSpline p(fb, ax);
    const auto view = p.view();
    double mass = 0.0;
    for (int i = 0; i < 40; ++i) mass += view.remap_cell(i, 0.3, 0.3) * ax.step();
    CHECK(std::fabs(mass - 1.0) <= 1e-14);
  }

  TEST_CASE("closed advection loop matches the spline shift symbol") {
    const int n = 70;
    const double u = 0.2;
    const Axis ax(n, 0.0, 1.0, Boundary::Periodic);
    const auto f0 = sine_averages(ax);
    auto f = f0;
    for (int step = 0; step < 350; ++step) {
      const PrimitiveSpline p(f, ax);
      const auto view = p.view();
      std::vector<double> next(n);
      for (int i = 0; i < n; ++i) next[i] = view.remap_cell(i, u, u);
      f = next;
    }
    double err = 0.0, amp = 0.0;
    for (int i = 0; i < n; ++i) {
      err = std::max(err, std::fabs(f[i] - f0[i]));
      amp = std::max(amp, std::fabs(f0[i]));
    }
    const std::complex<double> lam = spline_shift_symbol(2.0 * kPi / n, u);
    const double predicted = std::abs(std::pow(lam, 350) - 1.0) * amp;
    CHECK(err == doctest::Approx(predicted).epsilon(0.02));
    CHECK(err < 1e-4);
  }
}
