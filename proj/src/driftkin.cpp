#include "vpsm/driftkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vpsm/error.hpp"
#include "vpsm/kernels.hpp"

namespace vpsm {

void validate(const SchemeConfig& s) {
  if (s.scheme == Scheme::BSL && s.form == Form::FiniteVolume) {
    throw ConfigError("BSL is not conservative and has no finite-volume form");
  }
  validate(s.limiter());
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::BSL: return "bsl";
    case Scheme::PSM: return "psm";
    case Scheme::SLS: return "sls";
  }
  return "?";
}

const char* to_string(Form f) { return f == Form::DirectionalSplit ? "split" : "fv"; }

Scheme parse_scheme(const std::string& s) {
  if (s == "bsl") return Scheme::BSL;
  if (s == "psm") return Scheme::PSM;
  if (s == "sls") return Scheme::SLS;
  throw ConfigError("unknown scheme '" + s + "' (expected bsl, psm or sls)");
}

Form parse_form(const std::string& s) {
  if (s == "split" || s == "ds") return Form::DirectionalSplit;
  if (s == "fv") return Form::FiniteVolume;
  throw ConfigError("unknown form '" + s + "' (expected split or fv)");
}

PhaseGrid4D BenchmarkGrid::build() const {
  return build_grid({nr, r_min, r_max, Boundary::Neumann},
                    {ntheta, 0.0, 2.0 * std::numbers::pi, Boundary::Periodic},
                    {nz, 0.0, z_length, Boundary::Periodic}, {nv, -v_max, v_max, Boundary::Neumann});
}

PhysicalParams BenchmarkSpec::physics() const {
  PhysicalParams p;
  p.B = B;
  p.charge = charge;
  p.mass = mass;
  p.e = e;
  p.omega0 = omega0;
  p.n0 = {kappa_n, delta_n, r_peak};
  p.Ti = {kappa_T, delta_T, r_peak};
  p.Te = {kappa_T, delta_T, r_peak};
  return p;
}

void validate(const BenchmarkSpec& spec, const PhaseGrid4D& grid) {
  validate(spec.physics(), grid.r());
  if (spec.m < 0 || spec.n < 0) throw ConfigError("mode numbers must be non-negative");
  if (grid.ntheta() < 8 * spec.m) {
    throw ConfigError("ntheta must resolve the excited mode (ntheta >= 8 m)");
  }
  if (2 * spec.n >= grid.nz() && spec.n != 0) {
    throw ConfigError("nz too small for the parallel mode number");
  }
  if (!(spec.delta_g > 0.0)) throw ConfigError("delta_g must be positive");
  if (!std::isfinite(spec.epsilon)) throw ConfigError("epsilon must be finite");
  const CflConfig& c = spec.cfl;
  for (double x : {c.r, c.theta, c.z, c.v}) {
    if (!(x > 0.0)) throw ConfigError("CFL coefficients must be positive");
  }
  if (c.r > 1.0 || c.theta > 1.0) throw ConfigError("CFL_r and CFL_theta must not exceed 1");
  if (!(c.dt_max > 0.0) || !std::isfinite(c.dt_max)) {
    throw ConfigError("dt_max must be positive and finite");
  }
  if (!(spec.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
}

namespace {

double maxwellian(const PhysicalParams& p, double r, double v) {
  const double T = p.Ti(r);
  return p.n0(r) / std::sqrt(2.0 * std::numbers::pi * T / p.mass) *
         std::exp(-p.mass * v * v / (2.0 * T));
}

}  // namespace

Field4D init_distribution(const BenchmarkSpec& spec, const PhaseGrid4D& grid) {
  const PhysicalParams p = spec.physics();
  Field4D s;
  s.f.resize(grid.cells());
  const double L = grid.z().length();
  for (int i = 0; i < grid.nr(); ++i) {
    const double r = grid.r().center(i);
    const double g = std::exp(-std::pow((r - spec.r_peak) / spec.delta_g, 4));
    for (int j = 0; j < grid.ntheta(); ++j) {
      const double th = grid.theta().center(j);
      for (int k = 0; k < grid.nz(); ++k) {
        const double z = grid.z().center(k);
        const double dp =
            spec.epsilon * std::cos(2.0 * std::numbers::pi * spec.n * z / L + spec.m * th);
        for (int l = 0; l < grid.nv(); ++l) {
          const double v = grid.v().center(l);
          const double feq = maxwellian(p, r, v);
          const double h = std::exp(-v * v / 2.0);
          s.f[index4(grid, i, j, k, l)] = spec.epsilon == 0.0 ? feq : feq + feq * g * h * dp;
        }
      }
    }
  }
  return s;
}

std::vector<double> calibrated_n0(const BenchmarkSpec& spec, const PhaseGrid4D& grid) {
  const PhysicalParams p = spec.physics();
  std::vector<double> n0(grid.nr());
  for (int i = 0; i < grid.nr(); ++i) {
    const double r = grid.r().center(i);
    double s = 0.0;
    for (int l = 0; l < grid.nv(); ++l) s += maxwellian(p, r, grid.v().center(l));
    n0[i] = s * grid.v().step();
  }
  return n0;
}

double compute_dt(const FaceVelocity& a, const PhaseGrid4D& grid, const CflConfig& cfl) {
  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  };
  double dt = cfl.dt_max;
  auto limit = [&](double c, double dx, double amax) {
    if (amax > 0.0) dt = std::min(dt, c * dx / amax);
  };
  limit(cfl.r, grid.r().step(), max_abs(a.a_r));
  limit(cfl.theta, grid.theta().step(), max_abs(a.a_theta));
  limit(cfl.z, grid.z().step(), std::max(std::fabs(grid.v().center(0)),
                                          std::fabs(grid.v().center(grid.nv() - 1))));
  limit(cfl.v, grid.v().step(), max_abs(a.a_v));
  return dt;
}

// ---------------------------------------------------------------------------

struct Transport::Scratch {
  LineWorkspace ws;
  std::vector<double> in, out, u;
  std::unique_ptr<FvPlane> plane;
  std::vector<double> pf, pout;
};

Transport::Transport(const PhaseGrid4D& grid, const SchemeConfig& scheme)
    : grid_(grid),
      scheme_(scheme),
      r_line_(grid.nr(), false),
      t_line_(grid.ntheta(), true),
      z_line_(grid.nz(), true),
      v_line_(grid.nv(), false),
      r_bsl_(grid.nr(), false),
      t_bsl_(grid.ntheta(), true),
      z_bsl_(grid.nz(), true),
      v_bsl_(grid.nv(), false) {
  validate(scheme_);
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  for (int t = 0; t < threads; ++t) {
    auto s = std::make_unique<Scratch>();
    s->plane = std::make_unique<FvPlane>(grid.polar());
    scratch_.push_back(std::move(s));
  }
}

Transport::~Transport() = default;

Transport::Scratch& Transport::scratch() {
#ifdef _OPENMP
  return *scratch_[omp_get_thread_num()];
#else
  return *scratch_[0];
#endif
}

namespace {

constexpr int L = kernels::kLanes;

/// Gathers kLanes strided lines, transports them and scatters back.
/// base(q) is the offset of line q; u(q) its displacements.
template <class Base, class Disp>
void conservative_lines(std::span<double> f, const LineAdvector& adv, long count,
                        std::size_t stride, Base base, Disp disp, const LimiterConfig& lim,
                        LineWorkspace& ws, std::vector<double>& in, std::vector<double>& out,
                        long q0) {
  const int n = adv.cells();
  in.resize(static_cast<std::size_t>(n) * L);
  out.resize(static_cast<std::size_t>(n) * L);
  const int lanes = static_cast<int>(std::min<long>(L, count - q0));
  const double* fp[L];
  const double* up[L];
  double* op[L];
  for (int lane = 0; lane < lanes; ++lane) {
    const std::size_t b = base(q0 + lane);
    double* dst = in.data() + static_cast<std::size_t>(lane) * n;
    for (int x = 0; x < n; ++x) dst[x] = f[b + x * stride];
    fp[lane] = dst;
    up[lane] = disp(q0 + lane);
    op[lane] = out.data() + static_cast<std::size_t>(lane) * n;
  }
  if (lanes == L) {
    adv.advect_batch(fp, up, lim, op, ws);
  } else {
    for (int lane = 0; lane < lanes; ++lane) {
      adv.advect({fp[lane], static_cast<std::size_t>(n)},
                 {up[lane], static_cast<std::size_t>(n + 1)}, lim,
                 {op[lane], static_cast<std::size_t>(n)}, ws);
    }
  }
  for (int lane = 0; lane < lanes; ++lane) {
    const std::size_t b = base(q0 + lane);
    for (int x = 0; x < n; ++x) f[b + x * stride] = op[lane][x];
  }
}

template <class Base, class Disp>
void bsl_line(std::span<double> f, const BslLine& line, std::size_t stride, Base base, Disp disp,
              LineWorkspace& ws, std::vector<double>& in, std::vector<double>& out, long q) {
  const int n = line.cells();
  in.resize(n);
  out.resize(n);
  const std::size_t b = base(q);
  for (int x = 0; x < n; ++x) in[x] = f[b + x * stride];
  line.advect(in, {disp(q), static_cast<std::size_t>(n)}, out, ws);
  for (int x = 0; x < n; ++x) f[b + x * stride] = out[x];
}

}  // namespace

void Transport::apply(std::span<const double> f, const FaceVelocity& a, double dt,
                      std::span<double> out) {
  if (scheme_.form == Form::FiniteVolume) {
    finite_volume(f, a, dt, out);
  } else {
    split(f, a, dt, out);
  }
}

void Transport::split(std::span<const double> f, const FaceVelocity& a, double dt,
                      std::span<double> out) {
  std::copy(f.begin(), f.end(), out.begin());
  sweep_v(out, a, 0.5 * dt);
  sweep_z(out, 0.5 * dt);
  theta_feet(a, 0.5 * dt);
  run_theta(out);
  sweep_r(out, a, dt);
  run_theta(out);
  sweep_z(out, 0.5 * dt);
  sweep_v(out, a, 0.5 * dt);
}

void Transport::finite_volume(std::span<const double> f, const FaceVelocity& a, double dt,
                              std::span<double> out) {
  std::copy(f.begin(), f.end(), out.begin());
  sweep_v(out, a, 0.5 * dt);
  sweep_z(out, 0.5 * dt);
  sweep_plane(out, a, dt);
  sweep_z(out, 0.5 * dt);
  sweep_v(out, a, 0.5 * dt);
}

void Transport::sweep_v(std::span<double> f, const FaceVelocity& a, double dt) {
  const int nv = grid_.nv();
  const long lines = static_cast<long>(grid_.nr()) * grid_.ntheta() * grid_.nz();
  const double c = dt / grid_.v().step();
  auto base = [nv](long q) { return static_cast<std::size_t>(q) * nv; };
  if (scheme_.scheme == Scheme::BSL) {
#pragma omp parallel for schedule(static)
    for (long q = 0; q < lines; ++q) {
      Scratch& s = scratch();
      s.u.assign(nv, c * a.a_v[q]);
      bsl_line(f, v_bsl_, 1, base, [&](long) { return s.u.data(); }, s.ws, s.in, s.out, q);
    }
    return;
  }
  const long groups = (lines + L - 1) / L;
#pragma omp parallel for schedule(static)
  for (long g = 0; g < groups; ++g) {
    Scratch& s = scratch();
    s.u.resize(static_cast<std::size_t>(L) * (nv + 1));
    for (int lane = 0; lane < L && g * L + lane < lines; ++lane) {
      std::fill_n(s.u.begin() + lane * (nv + 1), nv + 1, c * a.a_v[g * L + lane]);
    }
    auto disp = [&](long q) { return s.u.data() + (q - g * L) * (nv + 1); };
    conservative_lines(f, v_line_, lines, 1, base, disp, {}, s.ws, s.in, s.out, g * L);
  }
}

void Transport::sweep_z(std::span<double> f, double dt) {
  const int nt = grid_.ntheta(), nz = grid_.nz(), nv = grid_.nv();
  const double dz = grid_.z().step();
  std::vector<double> u(static_cast<std::size_t>(nv) * (nz + 1));
  for (int l = 0; l < nv; ++l) {
    std::fill_n(u.begin() + static_cast<std::size_t>(l) * (nz + 1), nz + 1,
                dt * grid_.v().center(l) / dz);
  }
  // Lines (i, j, l) with l fastest: q = (i nt + j) nv + l.
  const long lines = static_cast<long>(grid_.nr()) * nt * nv;
  auto base = [nz, nv](long q) {
    return static_cast<std::size_t>(q / nv) * nz * nv + static_cast<std::size_t>(q % nv);
  };
  auto disp = [&](long q) { return u.data() + (q % nv) * (nz + 1); };
  if (scheme_.scheme == Scheme::BSL) {
#pragma omp parallel for schedule(static)
    for (long q = 0; q < lines; ++q) {
      Scratch& s = scratch();
      bsl_line(f, z_bsl_, nv, base, disp, s.ws, s.in, s.out, q);
    }
    return;
  }
  const long groups = (lines + L - 1) / L;
#pragma omp parallel for schedule(static)
  for (long g = 0; g < groups; ++g) {
    Scratch& s = scratch();
    conservative_lines(f, z_line_, lines, nv, base, disp, {}, s.ws, s.in, s.out, g * L);
  }
}

void Transport::theta_feet(const FaceVelocity& a, double dt) {
  const int nr = grid_.nr(), nt = grid_.ntheta(), nz = grid_.nz();
  const bool bsl = scheme_.scheme == Scheme::BSL;
  theta_stride_ = bsl ? nt : nt + 1;
  theta_u_.resize(static_cast<std::size_t>(nr) * nz * theta_stride_);
  const double inv = 1.0 / grid_.theta().step();
#pragma omp parallel for schedule(static)
  for (long q = 0; q < static_cast<long>(nr) * nz; ++q) {
    const int i = static_cast<int>(q / nz), k = static_cast<int>(q % nz);
    std::vector<double> vel(nt);
    for (int j = 0; j < nt; ++j) vel[j] = a.atheta(i, j, k) * inv;
    const LineVelocity lv(vel, true);
    double* u = theta_u_.data() + q * theta_stride_;
    if (bsl) {
      for (int j = 0; j < nt; ++j) u[j] = lv.displacement(j + 0.5, dt);
    } else {
      for (int j = 0; j < nt; ++j) u[j] = lv.displacement(j, dt);
      u[nt] = u[0];
    }
  }
}

void Transport::run_theta(std::span<double> f) {
  const int nt = grid_.ntheta(), nz = grid_.nz(), nv = grid_.nv();
  // Lines (i, k, l), q = (i nz + k) nv + l; feet depend on (i, k) only.
  const long lines = static_cast<long>(grid_.nr()) * nz * nv;
  const std::size_t stride = static_cast<std::size_t>(nz) * nv;
  auto base = [nt, nz, nv](long q) {
    const long l = q % nv, ik = q / nv;
    const long i = ik / nz, k = ik % nz;
    return (static_cast<std::size_t>(i) * nt * nz + k) * nv + l;
  };
  auto disp = [&](long q) { return theta_u_.data() + (q / nv) * theta_stride_; };
  if (scheme_.scheme == Scheme::BSL) {
#pragma omp parallel for schedule(static)
    for (long q = 0; q < lines; ++q) {
      Scratch& s = scratch();
      bsl_line(f, t_bsl_, stride, base, disp, s.ws, s.in, s.out, q);
    }
    return;
  }
  const LimiterConfig lim = scheme_.limiter();
  const long groups = (lines + L - 1) / L;
#pragma omp parallel for schedule(static)
  for (long g = 0; g < groups; ++g) {
    Scratch& s = scratch();
    conservative_lines(f, t_line_, lines, stride, base, disp, lim, s.ws, s.in, s.out, g * L);
  }
}

void Transport::sweep_theta(std::span<double> f, const FaceVelocity& a, double dt) {
  theta_feet(a, dt);
  run_theta(f);
}

void Transport::r_feet(const FaceVelocity& a, double dt) {
  const int nr = grid_.nr(), nt = grid_.ntheta(), nz = grid_.nz();
  const bool bsl = scheme_.scheme == Scheme::BSL;
  r_stride_ = bsl ? nr : nr + 1;
  r_u_.resize(static_cast<std::size_t>(nt) * nz * r_stride_);
  const double inv = 1.0 / grid_.r().step();
#pragma omp parallel for schedule(static)
  for (long q = 0; q < static_cast<long>(nt) * nz; ++q) {
    const int j = static_cast<int>(q / nz), k = static_cast<int>(q % nz);
    std::vector<double> vel(nr + 1);
    for (int i = 0; i <= nr; ++i) vel[i] = a.ar(i, j, k) * inv;
    const LineVelocity lv(vel, false);
    double* u = r_u_.data() + q * r_stride_;
    if (bsl) {
      for (int i = 0; i < nr; ++i) u[i] = lv.displacement(i + 0.5, dt);
    } else {
      for (int i = 0; i <= nr; ++i) u[i] = lv.displacement(i, dt);
    }
  }
}

void Transport::run_r(std::span<double> f) {
  const int nr = grid_.nr(), nt = grid_.ntheta(), nz = grid_.nz(), nv = grid_.nv();
  // Lines (j, k, l), q = (j nz + k) nv + l; base offset equals q.
  const long lines = static_cast<long>(nt) * nz * nv;
  const std::size_t stride = static_cast<std::size_t>(nt) * nz * nv;
  auto base = [](long q) { return static_cast<std::size_t>(q); };
  auto disp = [&](long q) { return r_u_.data() + (q / nv) * r_stride_; };
  if (scheme_.scheme == Scheme::BSL) {
#pragma omp parallel for schedule(static)
    for (long q = 0; q < lines; ++q) {
      Scratch& s = scratch();
      bsl_line(f, r_bsl_, stride, base, disp, s.ws, s.in, s.out, q);
    }
    return;
  }
  // The conservative r sweep moves r f; the update is divided back by r_i.
  // With df/dr = 0 at a wall, d(r f)/dr = f there: that fixes the end
  // curvature of the primitive, so constants in f survive the sweep.
  const double dr = grid_.r().step();
  std::vector<double> rc(nr);
  for (int i = 0; i < nr; ++i) rc[i] = grid_.r().center(i);
  const LimiterConfig lim = scheme_.limiter();
  const long groups = (lines + L - 1) / L;
#pragma omp parallel for schedule(static)
  for (long g = 0; g < groups; ++g) {
    Scratch& s = scratch();
    const long q0 = g * L;
    const int lanes = static_cast<int>(std::min<long>(L, lines - q0));
    s.pf.resize(static_cast<std::size_t>(nr) * L);
    s.pout.resize(static_cast<std::size_t>(nr) * L);
    const double* fp[L];
    const double* up[L];
    double* op[L];
    EndCurvature ends[L];
    for (int lane = 0; lane < lanes; ++lane) {
      double* dst = s.pf.data() + static_cast<std::size_t>(lane) * nr;
      for (int i = 0; i < nr; ++i) dst[i] = rc[i] * f[q0 + lane + i * stride];
      ends[lane] = {dr * f[q0 + lane], dr * f[q0 + lane + (nr - 1) * stride]};
      fp[lane] = dst;
      up[lane] = disp(q0 + lane);
      op[lane] = s.pout.data() + static_cast<std::size_t>(lane) * nr;
    }
    if (lanes == L) {
      r_line_.advect_batch(fp, up, lim, op, s.ws, ends);
    } else {
      for (int lane = 0; lane < lanes; ++lane) {
        r_line_.advect({fp[lane], static_cast<std::size_t>(nr)},
                       {up[lane], static_cast<std::size_t>(nr + 1)}, lim,
                       {op[lane], static_cast<std::size_t>(nr)}, s.ws, ends[lane]);
      }
    }
    for (int lane = 0; lane < lanes; ++lane) {
      for (int i = 0; i < nr; ++i) {
        double& x = f[q0 + lane + i * stride];
        x = x + (op[lane][i] - fp[lane][i]) / rc[i];
      }
    }
  }
}

void Transport::sweep_r(std::span<double> f, const FaceVelocity& a, double dt) {
  r_feet(a, dt);
  run_r(f);
}

void Transport::sweep_plane(std::span<double> f, const FaceVelocity& a, double dt) {
  if (scheme_.scheme == Scheme::BSL) throw ConfigError("BSL has no finite-volume form");
  const int nr = grid_.nr(), nt = grid_.ntheta(), nz = grid_.nz(), nv = grid_.nv();
  std::vector<PlaneVelocity> planes(nz);
  for (int k = 0; k < nz; ++k) planes[k] = plane_velocity(a, k);
  const LimiterConfig lim = scheme_.limiter();
  const std::size_t stride = static_cast<std::size_t>(nz) * nv;
  const long count = static_cast<long>(nz) * nv;
#pragma omp parallel for schedule(static)
  for (long q = 0; q < count; ++q) {
    Scratch& s = scratch();
    const std::size_t off = static_cast<std::size_t>(q);  // k nv + l
    const int k = static_cast<int>(q / nv);
    s.pf.resize(static_cast<std::size_t>(nr) * nt);
    s.pout.resize(s.pf.size());
    for (std::size_t c = 0; c < s.pf.size(); ++c) s.pf[c] = f[off + c * stride];
    s.plane->fluxes(s.pf, planes[k], dt, lim);
    s.plane->update_unsplit(s.pf, s.pout);
    for (std::size_t c = 0; c < s.pf.size(); ++c) f[off + c * stride] = s.pout[c];
  }
}

// ---------------------------------------------------------------------------

DriftKineticSolver::DriftKineticSolver(const PhaseGrid4D& grid, const BenchmarkSpec& spec,
                                       const SchemeConfig& scheme)
    : grid_(grid),
      spec_(spec),
      params_((validate(spec, grid), spec.physics())),
      solver_(grid_, params_, calibrated_n0(spec, grid)),
      transport_(grid_, scheme),
      state_(init_distribution(spec, grid_)) {
  half_.resize(grid_.cells());
}

NodalPotential DriftKineticSolver::potential(std::span<const double> f) const {
  return solver_.solve(density_moment(f, grid_));
}

FaceVelocity DriftKineticSolver::velocity(std::span<const double> f) const {
  return velocity_from_potential(potential(f), grid_, params_);
}

double DriftKineticSolver::step(double dt, double dt_limit) {
  phi_n_ = potential(state_.f);
  a_n_ = velocity_from_potential(phi_n_, grid_, params_);
  if (dt <= 0.0) dt = std::min(compute_dt(a_n_, grid_, spec_.cfl), dt_limit);
  transport_.apply(state_.f, a_n_, 0.5 * dt, half_);
  const FaceVelocity a_half = velocity(half_);
  transport_.apply(state_.f, a_half, dt, half_);
  state_.f.swap(half_);
  state_.t += dt;
  return dt;
}

}  // namespace vpsm
