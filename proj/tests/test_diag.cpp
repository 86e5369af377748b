#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "vpsm/diag.hpp"
#include "vpsm/error.hpp"

using namespace vpsm;
using namespace testing_support;

namespace {

std::vector<double> mode_field(const PhaseGrid4D& g, int m, int n, double amp, double shift) {
  std::vector<double> d(static_cast<std::size_t>(g.nr()) * g.ntheta() * g.nz());
  for (int i = 0; i < g.nr(); ++i) {
    for (int j = 0; j < g.ntheta(); ++j) {
      for (int k = 0; k < g.nz(); ++k) {
        const double ph = m * (g.theta().center(j) + shift) +
                          2.0 * kPi * n * g.z().center(k) / g.z().length();
        d[(static_cast<std::size_t>(i) * g.ntheta() + j) * g.nz() + k] = 1.0 + amp * std::cos(ph);
      }
    }
  }
  return d;
}

}  // namespace

TEST_SUITE("diag") {
  TEST_CASE("compensated sum") {
    KahanSum s;
    s.add(1.0);
    for (int q = 0; q < 1000; ++q) s.add(1e-16);
    CHECK(s.value() == doctest::Approx(1.0 + 1e-13).epsilon(1e-15));
  }

  TEST_CASE("mass and norm of a constant") {
    const auto g = small_grid(8, 16, 4, 6);
    const std::vector<double> f(g.cells(), 2.0);
    const double vol = kPi * (81.0 - 1.0) * g.z().length() * g.v().length();
    CHECK(total_mass(f, g) == doctest::Approx(2.0 * vol).epsilon(1e-14));
    CHECK(l2_norm(f, g) == doctest::Approx(std::sqrt(4.0 * vol)).epsilon(1e-14));
  }

  TEST_CASE("extrema") {
    const auto g = small_grid(4, 8, 4, 4);
    std::vector<double> f(g.cells(), 3.0);
    const Extrema e = slice_extrema(f, g, 2, 0);
    CHECK(e.min == 3.0);
    CHECK(e.max == 3.0);
    f[((1 * 8 + 3) * 4 + 0) * 4 + 2] = 5.0;
    f[((1 * 8 + 3) * 4 + 1) * 4 + 2] = -5.0;  // other z plane
    const Extrema s = slice_extrema(f, g, 2, 0);
    CHECK(s.max == 5.0);
    CHECK(s.min == 3.0);
    CHECK(global_extrema(f).min == -5.0);
    CHECK(range_expansion({0.9, 2.2}, {1.0, 2.0}) == doctest::Approx(0.3));
    CHECK(range_expansion({1.1, 1.9}, {1.0, 2.0}) == 0.0);
    CHECK_THROWS(slice_extrema(f, g, 4, 0));
  }

  TEST_CASE("mode amplitudes") {
    const auto g = small_grid(6, 32, 8);
    const auto d = mode_field(g, 3, 2, 1e-3, 0.0);
    CHECK(mode_amplitude(d, g, 3, 2) == doctest::Approx(0.5e-3).epsilon(1e-12));
    CHECK(mode_amplitude(d, g, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mode_amplitude(d, g, 4, 2) <= 1e-15);
    CHECK(competing_amplitude(d, g, 3, 2) <= 1e-15);

    const auto flat = mode_field(g, 0, 0, 0.0, 0.0);
    CHECK(mode_amplitude(flat, g, 5, 1) <= 1e-15);

    const auto shifted = mode_field(g, 3, 2, 1e-3, 0.37);
    CHECK(std::fabs(mode_amplitude(shifted, g, 3, 2) - mode_amplitude(d, g, 3, 2)) <= 1e-13 * 1e-3);
    CHECK_THROWS(mode_amplitude(d, g, 17, 0));
  }

  TEST_CASE("growth rate fit") {
    std::vector<double> t, a, c;
    for (int q = 0; q < 20; ++q) {
      t.push_back(0.5 * q);
      a.push_back(std::exp(0.3 * 0.5 * q));
      c.push_back(2.0);
    }
    const auto fit = growth_rate_fit(t, a);
    CHECK(std::fabs(fit.gamma - 0.3) <= 1e-12);
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(growth_rate_fit(t, c).gamma) <= 1e-15);
    CHECK_THROWS_AS(growth_rate_fit(std::span(t).first(9), std::span(a).first(9)), NumericalError);
    a[4] = 0.0;
    CHECK_THROWS_AS(growth_rate_fit(t, a), NumericalError);
  }

  TEST_CASE("csv rows keep full precision") {
    DiagRecord r;
    r.step = 7;
    r.time = 0.1;
    r.mass = 1.0 / 3.0;
    r.mode = 1e-300;
    const std::string row = csv_row(r);
    std::stringstream ss(row);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    CHECK(cells.size() == 12u);
    CHECK(std::stod(cells[1]) == 0.1);
    CHECK(std::stod(cells[3]) == 1.0 / 3.0);
    CHECK(std::stod(cells[9]) == 1e-300);
    CHECK(csv_header().find("slice_min") != std::string::npos);
  }

  TEST_CASE("binary dumps") {
    const auto dir = std::filesystem::temp_directory_path() / "vpsm_diag_test";
    std::filesystem::create_directories(dir);
    const std::vector<double> v = {1.0, -2.5, 1.0 / 3.0, 1e-310, 0.0, 7.0};
    const std::uint32_t dims[4] = {3, 2, 1, 1};
    write_dump(dir / "s.bin", v, dims, {{"time", "1.5"}});
    std::ifstream in(dir / "s.bin", std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
    REQUIRE(bytes.size() == 4u + 4u + 16u + 48u);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "VPSM");
    CHECK(bytes[4] == 1);
    CHECK(bytes[8] == 3);
    CHECK(bytes[12] == 2);
    // 1.0 little endian: 00 .. 00 f0 3f
    CHECK(bytes[24 + 6] == 0xf0);
    CHECK(bytes[24 + 7] == 0x3f);
    const Dump d = read_dump(dir / "s.bin");
    CHECK(d.values == v);
    CHECK(d.dims[0] == 3u);
    std::ifstream meta(dir / "s.bin.meta");
    std::string line;
    std::getline(meta, line);
    CHECK(line == "time = 1.5");
    std::filesystem::remove_all(dir);
  }
}
