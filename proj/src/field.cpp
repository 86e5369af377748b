#include "vpsm/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vpsm/error.hpp"
#include "vpsm/spline.hpp"

namespace vpsm {

double RadialProfile::operator()(double r) const {
  return std::exp(-kappa * delta * std::tanh((r - r_peak) / delta));
}

void validate(const PhysicalParams& p, const Axis& r) {
  if (p.B == 0.0 || !std::isfinite(p.B)) throw ConfigError("magnetic field B must be nonzero");
  if (!(p.mass > 0.0)) throw ConfigError("ion mass must be positive");
  if (!(p.omega0 > 0.0)) throw ConfigError("omega0 must be positive");
  if (!(p.n0.delta > 0.0) || !(p.Ti.delta > 0.0) || !(p.Te.delta > 0.0)) {
    throw ConfigError("profile widths must be positive");
  }
  for (int i = 0; i <= r.size(); ++i) {
    const double x = r.node(i);
    const double vals[] = {p.n0(x), p.Ti(x), p.Te(x)};
    for (double v : vals) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError("profiles must be positive and finite on the radial domain");
      }
    }
  }
}

FaceVelocity::FaceVelocity(int nr_cells, int ntheta_cells, int nz_cells)
    : nr(nr_cells),
      ntheta(ntheta_cells),
      nz(nz_cells),
      a_r(static_cast<std::size_t>(nr_cells + 1) * ntheta_cells * nz_cells, 0.0),
      a_theta(static_cast<std::size_t>(nr_cells) * ntheta_cells * nz_cells, 0.0),
      a_v(static_cast<std::size_t>(nr_cells) * ntheta_cells * nz_cells, 0.0) {}

namespace {

void check_shape(const NodalPotential& phi, const PhaseGrid4D& grid) {
  if (phi.nr != grid.nr() || phi.ntheta != grid.ntheta() || phi.nz != grid.nz()) {
    throw std::invalid_argument("potential does not match the grid");
  }
}

void fill_parallel_field(const NodalPotential& phi, const PhaseGrid4D& grid,
                         const PhysicalParams& params, FaceVelocity& a) {
  const int nr = grid.nr(), nt = grid.ntheta(), nz = grid.nz();
  const double qm = params.charge / params.mass;
  const double inv2dz = 1.0 / (2.0 * grid.z().step());
  auto mean4 = [&](int i, int j, int k) {
    return 0.25 * (phi(i, j, k) + phi(i + 1, j, k) + phi(i, j + 1, k) + phi(i + 1, j + 1, k));
  };
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nz; ++k) {
        const double ez = -(mean4(i, j, k + 1) - mean4(i, j, k - 1)) * inv2dz;
        a.a_v[a.c_index(i, j, k)] = qm * ez;
      }
    }
  }
}

}  // namespace

FaceVelocity velocity_from_potential(const NodalPotential& phi, const PhaseGrid4D& grid,
                                     const PhysicalParams& params) {
  check_shape(phi, grid);
  const int nr = grid.nr(), nt = grid.ntheta(), nz = grid.nz();
  const double B = params.B;
  const double dr = grid.r().step(), dth = grid.theta().step();
  FaceVelocity a(nr, nt, nz);
  for (int i = 0; i <= nr; ++i) {
    const double c = -1.0 / (grid.r().node(i) * B * dth);
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nz; ++k) {
        a.a_r[a.r_index(i, j, k)] = c * (phi(i, j + 1, k) - phi(i, j, k));
      }
    }
  }
  for (int i = 0; i < nr; ++i) {
    const double c = 1.0 / (grid.r().center(i) * B * dr);
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nz; ++k) {
        a.a_theta[a.c_index(i, j, k)] = c * (phi(i + 1, j, k) - phi(i, j, k));
      }
    }
  }
  fill_parallel_field(phi, grid, params, a);
  return a;
}

FaceVelocity spline_velocity_from_potential(const NodalPotential& phi, const PhaseGrid4D& grid,
                                            const PhysicalParams& params) {
  check_shape(phi, grid);
  const int nr = grid.nr(), nt = grid.ntheta(), nz = grid.nz();
  const double B = params.B;
  FaceVelocity a(nr, nt, nz);
  std::vector<double> line_t(nt), line_r(nr + 1);
  for (int k = 0; k < nz; ++k) {
    for (int i = 0; i <= nr; ++i) {
      for (int j = 0; j < nt; ++j) line_t[j] = phi(i, j, k);
      const CubicSpline s(line_t, grid.theta(), Placement::Nodes);
      const double c = -1.0 / (grid.r().node(i) * B);
      for (int j = 0; j < nt; ++j) {
        a.a_r[a.r_index(i, j, k)] = c * s.derivative(grid.theta().center(j));
      }
    }
    for (int j = 0; j < nt; ++j) {
      for (int i = 0; i <= nr; ++i) line_r[i] = phi(i, j, k);
      const CubicSpline s(line_r, grid.r(), Placement::Nodes);
      for (int i = 0; i < nr; ++i) {
        const double rc = grid.r().center(i);
        a.a_theta[a.c_index(i, j, k)] = s.derivative(rc) / (rc * B);
      }
    }
  }
  fill_parallel_field(phi, grid, params, a);
  return a;
}

std::vector<double> discrete_divergence(const FaceVelocity& a, const PolarGrid& grid) {
  const int nr = a.nr, nt = a.ntheta, nz = a.nz;
  const double dr = grid.r().step(), dth = grid.theta().step();
  std::vector<double> div(static_cast<std::size_t>(nr) * nt * nz);
  for (int i = 0; i < nr; ++i) {
    const double rl = grid.r().node(i), rr = grid.r().node(i + 1), rc = grid.r().center(i);
    for (int j = 0; j < nt; ++j) {
      const int jp = j + 1 == nt ? 0 : j + 1;
      for (int k = 0; k < nz; ++k) {
        const double radial = (rr * a.ar(i + 1, j, k) - rl * a.ar(i, j, k)) / dr;
        const double azim = (rc * a.atheta(i, jp, k) - rc * a.atheta(i, j, k)) / dth;
        div[a.c_index(i, j, k)] = (radial + azim) / rc;
      }
    }
  }
  return div;
}

// ---------------------------------------------------------------------------

struct QuasiNeutralSolver::Plans {
  int nt = 0, nz = 0, nm = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Plans(int ntheta, int nzc) : nt(ntheta), nz(nzc), nm(ntheta / 2 + 1) {
    real = fftw_alloc_real(static_cast<std::size_t>(nt) * nz);
    spec = fftw_alloc_complex(static_cast<std::size_t>(nm) * nz);
    forward = fftw_plan_dft_r2c_2d(nz, nt, real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_2d(nz, nt, spec, real, FFTW_ESTIMATE);
    if (real == nullptr || spec == nullptr || forward == nullptr || backward == nullptr) {
      throw NumericalError("FFTW plan creation failed");
    }
  }
  ~Plans() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
};

QuasiNeutralSolver::QuasiNeutralSolver(const PhaseGrid4D& grid, const PhysicalParams& params,
                                       std::vector<double> n0_cells)
    : grid_(grid), params_(params), n0_(std::move(n0_cells)) {
  const int nr = grid.nr();
  if (static_cast<int>(n0_.size()) != nr) {
    throw std::invalid_argument("n0 needs one value per radial cell");
  }
  const double dr = grid.r().step();
  const double scale = 1.0 / (params.B * params.omega0);
  const int m = nr - 1;
  lower_.resize(m);
  upper_.resize(m);
  radial_diag_.resize(m);
  perp_.resize(m);
  adiabatic_.resize(m);
  for (int i = 1; i < nr; ++i) {
    const double rho = grid.r().node(i);
    const double dl = n0_[i - 1] * scale, du = n0_[i] * scale;
    lower_[i - 1] = -grid.r().center(i - 1) * dl / (rho * dr * dr);
    upper_[i - 1] = -grid.r().center(i) * du / (rho * dr * dr);
    radial_diag_[i - 1] = -(lower_[i - 1] + upper_[i - 1]);
    const double n0_node = 0.5 * (n0_[i - 1] + n0_[i]);
    perp_[i - 1] = n0_node * scale / (rho * rho);
    adiabatic_[i - 1] = params.e * n0_node / params.Te(rho);
  }
  plans_ = std::make_unique<Plans>(grid.ntheta(), grid.nz());
}

QuasiNeutralSolver::~QuasiNeutralSolver() = default;

NodalPotential QuasiNeutralSolver::corner_rhs(std::span<const double> density) const {
  const int nr = grid_.nr(), nt = grid_.ntheta(), nz = grid_.nz();
  if (density.size() != static_cast<std::size_t>(nr) * nt * nz) {
    throw std::invalid_argument("density has the wrong size");
  }
  auto dn = [&](int i, int j, int k) {
    const int jj = j < 0 ? j + nt : j;
    return density[(static_cast<std::size_t>(i) * nt + jj) * nz + k] - n0_[i];
  };
  NodalPotential rhs(nr, nt, nz);
  for (int i = 1; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nz; ++k) {
        rhs(i, j, k) =
            0.25 * ((dn(i - 1, j - 1, k) + dn(i - 1, j, k)) + (dn(i, j - 1, k) + dn(i, j, k)));
      }
    }
  }
  return rhs;
}

NodalPotential QuasiNeutralSolver::solve(std::span<const double> density) const {
  return solve_corners(corner_rhs(density));
}

NodalPotential QuasiNeutralSolver::solve_corners(const NodalPotential& rhs) const {
  const int nr = grid_.nr(), nt = grid_.ntheta(), nz = grid_.nz();
  check_shape(rhs, grid_);
  Plans& p = *plans_;
  const int nm = p.nm;
  const int m = nr - 1;
  const std::size_t plane = static_cast<std::size_t>(nm) * nz;
  std::vector<std::complex<double>> spectrum(plane * m);

  for (int i = 1; i < nr; ++i) {
    for (int k = 0; k < nz; ++k) {
      for (int j = 0; j < nt; ++j) p.real[k * nt + j] = rhs(i, j, k);
    }
    fftw_execute(p.forward);
    std::complex<double>* dst = spectrum.data() + (i - 1) * plane;
    for (std::size_t q = 0; q < plane; ++q) dst[q] = {p.spec[q][0], p.spec[q][1]};
  }

  const double dth = grid_.theta().step();
  std::vector<std::complex<double>> x(m);
  std::vector<double> cp(m);
  for (int k = 0; k < nz; ++k) {
    for (int mt = 0; mt < nm; ++mt) {
      const double lam =
          (2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * mt / nt)) / (dth * dth);
      const bool zero_mode = (mt == 0 && k == 0);
      for (int r = 0; r < m; ++r) x[r] = spectrum[r * plane + k * nm + mt];
      // Thomas elimination with real coefficients and a complex right-hand side.
      for (int r = 0; r < m; ++r) {
        const double diag =
            radial_diag_[r] + perp_[r] * lam + (zero_mode ? 0.0 : adiabatic_[r]);
        const double low = r > 0 ? lower_[r] : 0.0;
        const double pivot = diag - (r > 0 ? low * cp[r - 1] : 0.0);
        if (pivot == 0.0) throw NumericalError("singular quasi-neutral mode system");
        cp[r] = (r + 1 < m ? upper_[r] : 0.0) / pivot;
        x[r] = (x[r] - (r > 0 ? low * x[r - 1] : 0.0)) / pivot;
      }
      for (int r = m - 2; r >= 0; --r) x[r] -= cp[r] * x[r + 1];
      for (int r = 0; r < m; ++r) spectrum[r * plane + k * nm + mt] = x[r];
    }
  }

  NodalPotential phi(nr, nt, nz);
  const double norm = 1.0 / (static_cast<double>(nt) * nz);
  for (int i = 1; i < nr; ++i) {
    const std::complex<double>* src = spectrum.data() + (i - 1) * plane;
    for (std::size_t q = 0; q < plane; ++q) {
      p.spec[q][0] = src[q].real();
      p.spec[q][1] = src[q].imag();
    }
    fftw_execute(p.backward);
    for (int k = 0; k < nz; ++k) {
      for (int j = 0; j < nt; ++j) phi(i, j, k) = p.real[k * nt + j] * norm;
    }
  }
  return phi;
}

NodalPotential QuasiNeutralSolver::apply(const NodalPotential& phi) const {
  const int nr = grid_.nr(), nt = grid_.ntheta(), nz = grid_.nz();
  check_shape(phi, grid_);
  const double dth2 = grid_.theta().step() * grid_.theta().step();
  NodalPotential out(nr, nt, nz);
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < nt; ++j) {
      out(0, j, k) = phi(0, j, k);
      out(nr, j, k) = phi(nr, j, k);
    }
  }
  for (int i = 1; i < nr; ++i) {
    double mean = 0.0;
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nz; ++k) mean += phi(i, j, k);
    }
    mean /= static_cast<double>(nt) * nz;
    const int r = i - 1;
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nz; ++k) {
        const double radial = lower_[r] * phi(i - 1, j, k) + radial_diag_[r] * phi(i, j, k) +
                              upper_[r] * phi(i + 1, j, k);
        const double azim =
            perp_[r] * (2.0 * phi(i, j, k) - phi(i, j + 1, k) - phi(i, j - 1, k)) / dth2;
        out(i, j, k) = radial + azim + adiabatic_[r] * (phi(i, j, k) - mean);
      }
    }
  }
  return out;
}

std::vector<double> density_moment(std::span<const double> f, const PhaseGrid4D& grid) {
  const int nv = grid.nv();
  const double dv = grid.v().step();
  const std::size_t lines = static_cast<std::size_t>(grid.nr()) * grid.ntheta() * grid.nz();
  if (f.size() != lines * nv) throw std::invalid_argument("distribution has the wrong size");
  std::vector<double> n(lines);
  for (std::size_t q = 0; q < lines; ++q) {
    const double* line = f.data() + q * nv;
    double s = 0.0;
    for (int l = 0; l < nv; ++l) s += line[l];
    n[q] = s * dv;
  }
  return n;
}

}  // namespace vpsm
