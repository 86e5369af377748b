#include "vpsm/diag.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "vpsm/error.hpp"

namespace vpsm {

namespace {

void check_size(std::span<const double> f, const PhaseGrid4D& grid) {
  if (f.size() != grid.cells()) throw std::invalid_argument("field does not match the grid");
}

std::size_t per_radius(const PhaseGrid4D& g) {
  return static_cast<std::size_t>(g.ntheta()) * g.nz() * g.nv();
}

}  // namespace

double total_mass(std::span<const double> f, const PhaseGrid4D& grid) {
  check_size(f, grid);
  const std::size_t block = per_radius(grid);
  KahanSum total;
  for (int i = 0; i < grid.nr(); ++i) {
    KahanSum s;
    for (std::size_t q = 0; q < block; ++q) s.add(f[i * block + q]);
    total.add(s.value() * grid.phase_volume(i));
  }
  return total.value();
}

double l2_norm(std::span<const double> f, const PhaseGrid4D& grid) {
  check_size(f, grid);
  const std::size_t block = per_radius(grid);
  KahanSum total;
  for (int i = 0; i < grid.nr(); ++i) {
    KahanSum s;
    for (std::size_t q = 0; q < block; ++q) s.add(f[i * block + q] * f[i * block + q]);
    total.add(s.value() * grid.phase_volume(i));
  }
  return std::sqrt(total.value());
}

Extrema global_extrema(std::span<const double> f) {
  if (f.empty()) throw std::invalid_argument("empty field");
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  return {*lo, *hi};
}

Extrema slice_extrema(std::span<const double> f, const PhaseGrid4D& grid, int l, int k) {
  return global_extrema(extract_slice(f, grid, l, k));
}

std::vector<double> extract_slice(std::span<const double> f, const PhaseGrid4D& grid, int l,
                                  int k) {
  check_size(f, grid);
  if (l < 0 || l >= grid.nv() || k < 0 || k >= grid.nz()) {
    throw std::out_of_range("slice index out of range");
  }
  std::vector<double> s(static_cast<std::size_t>(grid.nr()) * grid.ntheta());
  for (int i = 0; i < grid.nr(); ++i) {
    for (int j = 0; j < grid.ntheta(); ++j) {
      s[i * grid.ntheta() + j] =
          f[((static_cast<std::size_t>(i) * grid.ntheta() + j) * grid.nz() + k) * grid.nv() + l];
    }
  }
  return s;
}

double range_expansion(const Extrema& now, const Extrema& ref) {
  const double grow = std::max(0.0, now.max - ref.max) + std::max(0.0, ref.min - now.min);
  return grow / ref.range();
}

namespace {

/// Modulus of the (m, n) coefficient of a (theta, z) plane with the given
/// strides; theta at cell index j sits at angle theta0 + j dtheta.
double plane_coefficient(const double* g, int nt, int nz, std::size_t sj, std::size_t sk, int m,
                         int n) {
  std::complex<double> c = 0.0;
  for (int j = 0; j < nt; ++j) {
    for (int k = 0; k < nz; ++k) {
      const long phase = (static_cast<long>(m) * j * nz + static_cast<long>(n) * k * nt) %
                         (static_cast<long>(nt) * nz);
      const double a = -2.0 * std::numbers::pi * static_cast<double>(phase) /
                       (static_cast<double>(nt) * nz);
      c += g[j * sj + k * sk] * std::complex<double>(std::cos(a), std::sin(a));
    }
  }
  return std::abs(c) / (static_cast<double>(nt) * nz);
}

void check_mode(const PhaseGrid4D& grid, int m, int n) {
  if (std::abs(m) > grid.ntheta() / 2 || n < 0 || n > grid.nz() / 2) {
    throw std::out_of_range("mode outside the resolved spectrum");
  }
}

}  // namespace

double mode_amplitude(std::span<const double> density, const PhaseGrid4D& grid, int m, int n) {
  check_mode(grid, m, n);
  const int nt = grid.ntheta(), nz = grid.nz();
  if (density.size() != static_cast<std::size_t>(grid.nr()) * nt * nz) {
    throw std::invalid_argument("density does not match the grid");
  }
  KahanSum s;
  for (int i = 0; i < grid.nr(); ++i) {
    s.add(plane_coefficient(density.data() + static_cast<std::size_t>(i) * nt * nz, nt, nz, nz, 1,
                            m, n));
  }
  return s.value() / grid.nr();
}

double mode_amplitude(const NodalPotential& phi, const PhaseGrid4D& grid, int m, int n) {
  check_mode(grid, m, n);
  const int nt = grid.ntheta(), nz = grid.nz();
  KahanSum s;
  for (int i = 1; i < grid.nr(); ++i) {
    s.add(plane_coefficient(phi.phi.data() + static_cast<std::size_t>(i) * nt * nz, nt, nz, nz, 1,
                            m, n));
  }
  return s.value() / (grid.nr() - 1);
}

double competing_amplitude(std::span<const double> density, const PhaseGrid4D& grid, int m,
                           int n) {
  double best = 0.0;
  for (int mm = -grid.ntheta() / 2 + 1; mm < grid.ntheta() / 2; ++mm) {
    for (int nn = 0; nn < grid.nz() / 2; ++nn) {
      if ((mm == 0 && nn == 0) || (mm == m && nn == n) || (mm == -m && nn == n && n == 0)) {
        continue;
      }
      if (nn == 0 && mm < 0) continue;  // conjugate of (-mm, 0)
      best = std::max(best, mode_amplitude(density, grid, mm, nn));
    }
  }
  return best;
}

GrowthFit growth_rate_fit(std::span<const double> t, std::span<const double> amplitude) {
  if (t.size() != amplitude.size()) throw std::invalid_argument("size mismatch");
  const std::size_t n = t.size();
  if (n < 10) throw NumericalError("growth fit needs at least 10 records");
  double mt = 0.0, my = 0.0;
  std::vector<double> y(n);
  for (std::size_t q = 0; q < n; ++q) {
    if (!(amplitude[q] > 0.0)) throw NumericalError("non-positive amplitude in the fit window");
    y[q] = std::log(amplitude[q]);
    mt += t[q];
    my += y[q];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    stt += (t[q] - mt) * (t[q] - mt);
    sty += (t[q] - mt) * (y[q] - my);
    syy += (y[q] - my) * (y[q] - my);
  }
  if (stt == 0.0) throw NumericalError("growth fit needs distinct times");
  GrowthFit fit;
  fit.gamma = sty / stt;
  fit.intercept = my - fit.gamma * mt;
  double sse = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    const double e = y[q] - (fit.intercept + fit.gamma * t[q]);
    sse += e * e;
  }
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - sse / syy;
  return fit;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_header() {
  return "step,time,dt,mass,l2,min,max,slice_min,slice_max,mode_amplitude,phi_mode_amplitude,"
         "max_divergence";
}

std::string csv_row(const DiagRecord& r) {
  std::string s = std::to_string(r.step);
  for (double x : {r.time, r.dt, r.mass, r.l2, r.min, r.max, r.slice_min, r.slice_max, r.mode,
                   r.phi_mode, r.divergence}) {
    s += ',';
    s += format_double(x);
  }
  return s;
}

void write_csv(const std::filesystem::path& path, std::span<const DiagRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << csv_header() << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_dump(const std::filesystem::path& path, std::span<const double> values,
                const std::uint32_t dims[4],
                const std::vector<std::pair<std::string, std::string>>& meta) {
  std::size_t count = 1;
  for (int d = 0; d < 4; ++d) count *= dims[d];
  if (count != values.size()) throw std::invalid_argument("dump dims do not match the data");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write("VPSM", 4);
  put_u32(out, 1);
  for (int d = 0; d < 4; ++d) put_u32(out, dims[d]);
  for (double x : values) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    unsigned char b[8];
    for (int q = 0; q < 8; ++q) b[q] = static_cast<unsigned char>(bits >> (8 * q));
    out.write(reinterpret_cast<const char*>(b), 8);
  }
  std::ofstream side(path.string() + ".meta", std::ios::binary);
  if (!side) throw std::runtime_error("cannot write " + path.string() + ".meta");
  for (const auto& [k, v] : meta) side << k << " = " << v << '\n';
}

Dump read_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "VPSM", 4) != 0) throw std::runtime_error("not a VPSM dump");
  if (get_u32(in) != 1) throw std::runtime_error("unsupported dump version");
  Dump d;
  std::size_t count = 1;
  for (int q = 0; q < 4; ++q) {
    d.dims[q] = get_u32(in);
    count *= d.dims[q];
  }
  d.values.resize(count);
  for (auto& x : d.values) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int q = 0; q < 8; ++q) bits |= static_cast<std::uint64_t>(b[q]) << (8 * q);
    x = std::bit_cast<double>(bits);
  }
  if (!in) throw std::runtime_error("truncated dump " + path.string());
  return d;
}

}  // namespace vpsm
