#include "vpsm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vpsm/error.hpp"
#include "vpsm/fv2d.hpp"

namespace vpsm {

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(1, n));
#else
  (void)n;
#endif
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

}  // namespace

const Step1dScheme* Step1dResult::find(const std::string& name) const {
  for (const auto& s : schemes) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

Step1dResult run_step1d(const RunConfig& c, const std::filesystem::path& out) {
  const Step1dConfig& cfg = c.step1d;
  const int n = cfg.cells;
  std::vector<double> f0(n, 0.0);
  for (int i = cfg.step_begin; i < cfg.step_end; ++i) f0[i] = cfg.height;
  double m0 = 0.0;
  for (double x : f0) m0 += x;

  std::vector<std::string> names;
  if (cfg.schemes == "all") {
    names = {"psm", "sls", "upwind"};
  } else {
    names = {cfg.schemes};
  }

  const LineAdvector line(n, true);
  LineWorkspace ws;
  const std::vector<double> u(n + 1, cfg.shift);
  Step1dResult result;
  std::vector<std::vector<double>> history(names.size());
  std::vector<std::vector<double>> stats(names.size());

  for (std::size_t s = 0; s < names.size(); ++s) {
    const std::string& name = names[s];
    Step1dScheme r;
    r.name = name;
    std::vector<double> f = f0, g(n), swept(n + 1);
    history[s] = f0;
    auto excursion = [&](const std::vector<double>& v) {
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      return std::max({0.0, *hi - cfg.height, -*lo}) / cfg.height;
    };
    for (int it = 0; it < cfg.iterations; ++it) {
      if (name == "upwind") {
        for (int k = 0; k <= n; ++k) {
          swept[k] = upwind_flux(f[(k + n - 1) % n], f[k % n], cfg.shift);
        }
        for (int i = 0; i < n; ++i) g[i] = f[i] + swept[i] - swept[i + 1];
      } else {
        line.advect(f, u, {name == "sls", c.scheme.K}, g, ws);
      }
      f.swap(g);
      double m = 0.0;
      for (double x : f) m += x;
      r.mass_error = std::max(r.mass_error, std::fabs(m - m0) / m0);
      r.peak_overshoot = std::max(r.peak_overshoot, excursion(f));
      const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
      stats[s].insert(stats[s].end(), {*hi, *lo, m});
      history[s].insert(history[s].end(), f.begin(), f.end());
    }
    r.final_overshoot = excursion(f);
    r.final_profile = f;
    result.schemes.push_back(std::move(r));
  }

  if (!out.empty()) {
    auto csv = open_out(out / "step1d_stats.csv");
    csv << "iteration";
    for (const auto& name : names) csv << ',' << name << "_max," << name << "_min," << name << "_mass";
    csv << '\n';
    for (int it = 0; it < cfg.iterations; ++it) {
      csv << it + 1;
      for (std::size_t s = 0; s < names.size(); ++s) {
        for (int q = 0; q < 3; ++q) csv << ',' << format_double(stats[s][3 * it + q]);
      }
      csv << '\n';
    }
    for (std::size_t s = 0; s < names.size(); ++s) {
      const std::uint32_t dims[4] = {static_cast<std::uint32_t>(cfg.iterations + 1),
                                     static_cast<std::uint32_t>(n), 1, 1};
      write_dump(out / ("step1d_" + names[s] + ".bin"), history[s], dims,
                 {{"scheme", names[s]},
                  {"layout", "iteration x cell"},
                  {"cells", std::to_string(n)},
                  {"shift", format_double(cfg.shift)},
                  {"K", format_double(c.scheme.K)}});
    }
    auto sum = open_out(out / "summary.txt");
    for (const auto& r : result.schemes) {
      sum << r.name << ".peak_overshoot = " << format_double(r.peak_overshoot) << '\n';
      sum << r.name << ".final_overshoot = " << format_double(r.final_overshoot) << '\n';
      sum << r.name << ".mass_error = " << format_double(r.mass_error) << '\n';
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

RotationResult run_rotation2d(const RunConfig& c, const std::filesystem::path& out) {
  const Rotation2dConfig& cfg = c.rotation;
  const PolarGrid grid(Axis(cfg.nr, cfg.r_min, cfg.r_max, Boundary::Neumann),
                       Axis(cfg.ntheta, 0.0, 2.0 * std::numbers::pi, Boundary::Periodic));
  const int nr = cfg.nr, nt = cfg.ntheta;

  // Phi = B r^2 / 2 on the corners, differentiated as in the 4D model.
  PlaneVelocity a{nr, nt, std::vector<double>(static_cast<std::size_t>(nr + 1) * nt, 0.0),
                  std::vector<double>(static_cast<std::size_t>(nr) * nt)};
  auto phi = [&](int i) { return cfg.B * grid.r().node(i) * grid.r().node(i) / 2.0; };
  double amax = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double v = (phi(i + 1) - phi(i)) / (grid.r().center(i) * cfg.B * grid.r().step());
    for (int j = 0; j < nt; ++j) a.a_theta[i * nt + j] = v;
    amax = std::max(amax, std::fabs(v));
  }

  const double period = 2.0 * std::numbers::pi * cfg.revolutions;
  const double dt0 = cfg.cfl * grid.theta().step() / amax;
  const int steps = static_cast<int>(std::ceil(period / dt0 - 1e-9));
  const double dt = period / steps;

  std::vector<double> f0(static_cast<std::size_t>(nr) * nt);
  const double x0 = cfg.blob_r * std::cos(cfg.blob_theta), y0 = cfg.blob_r * std::sin(cfg.blob_theta);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const double r = grid.r().center(i), th = grid.theta().center(j);
      const double dx = r * std::cos(th) - x0, dy = r * std::sin(th) - y0;
      f0[i * nt + j] = std::exp(-(dx * dx + dy * dy) / (2.0 * cfg.blob_width * cfg.blob_width));
    }
  }
  auto mass = [&](const std::vector<double>& f) {
    KahanSum m;
    for (int i = 0; i < nr; ++i) {
      KahanSum row;
      for (int j = 0; j < nt; ++j) row.add(f[i * nt + j]);
      m.add(row.value() * grid.cell_volume(i));
    }
    return m.value();
  };
  auto l2_diff = [&](const std::vector<double>& f) {
    KahanSum e, n;
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nt; ++j) {
        const double d = f[i * nt + j] - f0[i * nt + j];
        e.add(d * d * grid.cell_volume(i));
        n.add(f0[i * nt + j] * f0[i * nt + j] * grid.cell_volume(i));
      }
    }
    return std::sqrt(e.value() / n.value());
  };

  const double m0 = mass(f0);
  FvPlane plane(grid);
  std::vector<double> f = f0, g(f.size());
  RotationResult res;
  res.steps = steps;
  res.dt = dt;
  std::ofstream csv;
  if (!out.empty()) {
    csv = open_out(out / "rotation.csv");
    csv << "step,time,mass,l2_error\n";
    csv << 0 << ',' << format_double(0.0) << ',' << format_double(m0) << ',' << format_double(0.0)
        << '\n';
  }
  for (int s = 1; s <= steps; ++s) {
    plane.fluxes(f, a, dt, c.scheme.limiter());
    res.max_wall_flux = std::max(res.max_wall_flux, plane.wall_flux());
    if (c.scheme.form == Form::DirectionalSplit) {
      plane.update_split(f, g);
    } else {
      plane.update_unsplit(f, g);
    }
    f.swap(g);
    const double m = mass(f);
    res.mass_error = std::max(res.mass_error, std::fabs(m - m0) / m0);
    if (csv.is_open() && (s % c.stride == 0 || s == steps)) {
      csv << s << ',' << format_double(s * dt) << ',' << format_double(m) << ','
          << format_double(l2_diff(f)) << '\n';
    }
  }
  res.l2_error = l2_diff(f);

  if (!out.empty()) {
    const std::uint32_t dims[4] = {static_cast<std::uint32_t>(nr), static_cast<std::uint32_t>(nt), 1,
                                   1};
    write_dump(out / "rotation_final.bin", f, dims,
               {{"time", format_double(steps * dt)},
                {"scheme", to_string(c.scheme.scheme)},
                {"form", to_string(c.scheme.form)},
                {"r_min", format_double(cfg.r_min)},
                {"r_max", format_double(cfg.r_max)},
                {"theta_min", "0"},
                {"theta_max", format_double(2.0 * std::numbers::pi)}});
    auto sum = open_out(out / "summary.txt");
    sum << "steps = " << steps << "\ndt = " << format_double(dt)
        << "\nl2_error = " << format_double(res.l2_error)
        << "\nmass_error = " << format_double(res.mass_error)
        << "\nmax_wall_flux = " << format_double(res.max_wall_flux) << '\n';
  }
  return res;
}

// ---------------------------------------------------------------------------

DiagRecord make_record(const DriftKineticSolver& s, long step, double dt) {
  const PhaseGrid4D& g = s.grid();
  const auto& f = s.state().f;
  DiagRecord r;
  r.step = step;
  r.time = s.state().t;
  r.dt = dt;
  r.mass = total_mass(f, g);
  r.l2 = l2_norm(f, g);
  const Extrema e = global_extrema(f);
  r.min = e.min;
  r.max = e.max;
  const Extrema sl = slice_extrema(f, g, g.nv() / 2, 0);
  r.slice_min = sl.min;
  r.slice_max = sl.max;
  const auto density = density_moment(f, g);
  r.mode = mode_amplitude(density, g, s.spec().m, s.spec().n);
  const NodalPotential phi = s.potential(f);
  r.phi_mode = mode_amplitude(phi, g, s.spec().m, s.spec().n);
  const FaceVelocity a = velocity_from_potential(phi, g, s.spec().physics());
  double amax = 0.0;
  for (double x : a.a_r) amax = std::max(amax, std::fabs(x));
  for (double x : a.a_theta) amax = std::max(amax, std::fabs(x));
  double dmax = 0.0;
  for (double x : discrete_divergence(a, g.polar())) dmax = std::max(dmax, std::fabs(x));
  r.divergence = amax > 0.0 ? dmax * g.r().step() / amax : 0.0;
  return r;
}

DriftKineticResult run_driftkinetic(const RunConfig& c, const std::filesystem::path& out) {
  set_threads(c.threads);
  const PhaseGrid4D grid = c.grid.build();
  DriftKineticSolver s(grid, c.bench, c.scheme);
  DriftKineticResult res;
  res.slice0 = slice_extrema(s.state().f, grid, grid.nv() / 2, 0);
  res.records.push_back(make_record(s, 0, 0.0));

  std::vector<double> dumps = c.dump_times;
  std::sort(dumps.begin(), dumps.end());
  std::size_t next_dump = 0;
  auto dump = [&](long step) {
    if (out.empty()) return;
    while (next_dump < dumps.size() && s.state().t >= dumps[next_dump] - 1e-9) {
      const auto slice = extract_slice(s.state().f, grid, grid.nv() / 2, 0);
      const std::uint32_t dims[4] = {static_cast<std::uint32_t>(grid.nr()),
                                     static_cast<std::uint32_t>(grid.ntheta()), 1, 1};
      const std::string name = "slice_" + std::to_string(step) + ".bin";
      write_dump(out / name, slice, dims,
                 {{"time", format_double(s.state().t)},
                  {"requested_time", format_double(dumps[next_dump])},
                  {"step", std::to_string(step)},
                  {"scheme", to_string(c.scheme.scheme)},
                  {"form", to_string(c.scheme.form)},
                  {"r_min", format_double(grid.r().lo())},
                  {"r_max", format_double(grid.r().hi())},
                  {"theta_min", "0"},
                  {"theta_max", format_double(grid.theta().hi())},
                  {"z", format_double(grid.z().center(0))},
                  {"v_par", format_double(grid.v().center(grid.nv() / 2))}});
      ++next_dump;
    }
  };
  dump(0);

  const double t_end = c.bench.t_end;
  double mass = res.records.front().mass;
  long step = 0;
  while (s.state().t < t_end * (1.0 - 1e-12) && (c.max_steps == 0 || step < c.max_steps)) {
    const double remaining = t_end - s.state().t;
    const double dt = c.dt > 0.0 ? std::min(c.dt, remaining) : s.step(0.0, remaining);
    if (c.dt > 0.0) s.step(dt);
    ++step;
    const bool last = !(s.state().t < t_end * (1.0 - 1e-12)) || step == c.max_steps;
    const double m = total_mass(s.state().f, grid);
    res.max_step_mass_change = std::max(res.max_step_mass_change, std::fabs(m - mass) / mass);
    mass = m;
    if (step % c.stride == 0 || last) res.records.push_back(make_record(s, step, dt));
    dump(step);
  }
  res.steps = step;

  if (!out.empty()) {
    write_csv(out / "diagnostics.csv", res.records);
    auto sum = open_out(out / "summary.txt");
    sum << "steps = " << step << "\ntime = " << format_double(s.state().t)
        << "\nslice0_min = " << format_double(res.slice0.min)
        << "\nslice0_max = " << format_double(res.slice0.max)
        << "\nfinal_mass_change = "
        << format_double(std::fabs(res.records.back().mass - res.records.front().mass) /
                         res.records.front().mass)
        << '\n';
  }
  return res;
}

void run_experiment(const RunConfig& c) {
  validate(c);
  const std::filesystem::path out(c.out);
  std::filesystem::create_directories(out);
  {
    auto cfg = open_out(out / "config.effective.ini");
    cfg << write_config(c);
  }
  set_threads(c.threads);
  if (c.experiment == "step1d") {
    run_step1d(c, out);
  } else if (c.experiment == "rotation2d") {
    run_rotation2d(c, out);
  } else {
    run_driftkinetic(c, out);
  }
}

}  // namespace vpsm
