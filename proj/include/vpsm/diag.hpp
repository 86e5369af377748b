#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vpsm/field.hpp"
#include "vpsm/mesh.hpp"

namespace vpsm {

/// Compensated running sum.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

/// Sum of f times the phase-space cell measure, fixed order.
double total_mass(std::span<const double> f, const PhaseGrid4D& grid);
/// sqrt(sum f^2 times the cell measure).
double l2_norm(std::span<const double> f, const PhaseGrid4D& grid);

struct Extrema {
  double min = 0.0;
  double max = 0.0;
  double range() const { return max - min; }
};

Extrema global_extrema(std::span<const double> f);
/// Extrema over the (r, theta) slice at v index l and z index k.
Extrema slice_extrema(std::span<const double> f, const PhaseGrid4D& grid, int l, int k);
/// Growth of max - min beyond the reference range, relative to that range.
double range_expansion(const Extrema& now, const Extrema& ref);

/// Complex Fourier coefficient (1 / (ntheta nz)) sum g exp(-i (m theta_j + 2 pi n z_k / L))
/// of a (theta, z) field of each radial index, modulus averaged over r.
/// A cosine of amplitude A gives A / 2.
double mode_amplitude(std::span<const double> density, const PhaseGrid4D& grid, int m, int n);
/// Same on the interior corner radii of a potential.
double mode_amplitude(const NodalPotential& phi, const PhaseGrid4D& grid, int m, int n);

/// Largest amplitude of any mode other than (m, n) and (0, 0) with
/// |m'| < ntheta / 2, 0 <= n' < nz / 2.
double competing_amplitude(std::span<const double> density, const PhaseGrid4D& grid, int m,
                           int n);

struct GrowthFit {
  double gamma = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares fit of ln A against t. Needs at least 10 points and
/// positive amplitudes.
GrowthFit growth_rate_fit(std::span<const double> t, std::span<const double> amplitude);

struct DiagRecord {
  long step = 0;
  double time = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double l2 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double slice_min = 0.0;
  double slice_max = 0.0;
  double mode = 0.0;
  double phi_mode = 0.0;
  double divergence = 0.0;
};

/// CSV with a header row; every value at 17 significant digits.
void write_csv(const std::filesystem::path& path, std::span<const DiagRecord> records);
std::string csv_header();
std::string csv_row(const DiagRecord& r);

/// Binary dump: "VPSM", u32 version 1, four u32 dims, f64 values, all
/// little endian; plus path + ".meta" with key = value lines.
void write_dump(const std::filesystem::path& path, std::span<const double> values,
                const std::uint32_t dims[4], const std::vector<std::pair<std::string, std::string>>& meta);

struct Dump {
  std::uint32_t dims[4] = {0, 0, 0, 0};
  std::vector<double> values;
};
Dump read_dump(const std::filesystem::path& path);

/// (r, theta) slice at (k, l) as an nr x ntheta array.
std::vector<double> extract_slice(std::span<const double> f, const PhaseGrid4D& grid, int l, int k);

/// Formats with 17 significant digits.
std::string format_double(double x);

}  // namespace vpsm
