#include "vpsm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "vpsm/error.hpp"

namespace vpsm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string show(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double to_double(const std::string& v) {
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError("expected a number, got '" + v + "'");
  }
  return x;
}

long to_long(const std::string& v) {
  long x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("expected an integer, got '" + v + "'");
  }
  return x;
}

struct Entry {
  std::string section;
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <class T>
Entry real(const char* sec, const char* key, T RunConfig::*outer, double T::*field) {
  return {sec, key, [=](const RunConfig& c) { return show(c.*outer.*field); },
          [=](RunConfig& c, const std::string& v) { c.*outer.*field = to_double(v); }};
}

template <class T>
Entry integer(const char* sec, const char* key, T RunConfig::*outer, int T::*field) {
  return {sec, key, [=](const RunConfig& c) { return std::to_string(c.*outer.*field); },
          [=](RunConfig& c, const std::string& v) {
            const long x = to_long(v);
            if (x < INT32_MIN || x > INT32_MAX) throw ConfigError("integer out of range: " + v);
            c.*outer.*field = static_cast<int>(x);
          }};
}

const std::vector<Entry>& table() {
  static const std::vector<Entry> t = [] {
    std::vector<Entry> e;
    e.push_back({"run", "experiment", [](const RunConfig& c) { return c.experiment; },
                 [](RunConfig& c, const std::string& v) { c.experiment = v; }});
    e.push_back({"run", "out", [](const RunConfig& c) { return c.out; },
                 [](RunConfig& c, const std::string& v) { c.out = v; }});
    e.push_back({"run", "stride", [](const RunConfig& c) { return std::to_string(c.stride); },
                 [](RunConfig& c, const std::string& v) { c.stride = static_cast<int>(to_long(v)); }});
    e.push_back({"run", "dt", [](const RunConfig& c) { return show(c.dt); },
                 [](RunConfig& c, const std::string& v) { c.dt = to_double(v); }});
    e.push_back({"run", "threads", [](const RunConfig& c) { return std::to_string(c.threads); },
                 [](RunConfig& c, const std::string& v) { c.threads = static_cast<int>(to_long(v)); }});
    e.push_back({"run", "seed", [](const RunConfig& c) { return std::to_string(c.seed); },
                 [](RunConfig& c, const std::string& v) {
                   const long x = to_long(v);
                   if (x < 0) throw ConfigError("seed must be non-negative");
                   c.seed = static_cast<unsigned long>(x);
                 }});

    e.push_back({"scheme", "scheme", [](const RunConfig& c) { return std::string(to_string(c.scheme.scheme)); },
                 [](RunConfig& c, const std::string& v) { c.scheme.scheme = parse_scheme(v); }});
    e.push_back({"scheme", "form", [](const RunConfig& c) { return std::string(to_string(c.scheme.form)); },
                 [](RunConfig& c, const std::string& v) { c.scheme.form = parse_form(v); }});
    e.push_back(real("scheme", "K", &RunConfig::scheme, &SchemeConfig::K));

    e.push_back(integer("grid", "nr", &RunConfig::grid, &BenchmarkGrid::nr));
    e.push_back(integer("grid", "ntheta", &RunConfig::grid, &BenchmarkGrid::ntheta));
    e.push_back(integer("grid", "nz", &RunConfig::grid, &BenchmarkGrid::nz));
    e.push_back(integer("grid", "nv", &RunConfig::grid, &BenchmarkGrid::nv));
    e.push_back(real("grid", "r_min", &RunConfig::grid, &BenchmarkGrid::r_min));
    e.push_back(real("grid", "r_max", &RunConfig::grid, &BenchmarkGrid::r_max));
    e.push_back(real("grid", "z_length", &RunConfig::grid, &BenchmarkGrid::z_length));
    e.push_back(real("grid", "v_max", &RunConfig::grid, &BenchmarkGrid::v_max));

    e.push_back(integer("benchmark", "m", &RunConfig::bench, &BenchmarkSpec::m));
    e.push_back(integer("benchmark", "n", &RunConfig::bench, &BenchmarkSpec::n));
    e.push_back(real("benchmark", "epsilon", &RunConfig::bench, &BenchmarkSpec::epsilon));
    e.push_back(real("benchmark", "r_peak", &RunConfig::bench, &BenchmarkSpec::r_peak));
    e.push_back(real("benchmark", "kappa_n", &RunConfig::bench, &BenchmarkSpec::kappa_n));
    e.push_back(real("benchmark", "delta_n", &RunConfig::bench, &BenchmarkSpec::delta_n));
    e.push_back(real("benchmark", "kappa_T", &RunConfig::bench, &BenchmarkSpec::kappa_T));
    e.push_back(real("benchmark", "delta_T", &RunConfig::bench, &BenchmarkSpec::delta_T));
    e.push_back(real("benchmark", "delta_g", &RunConfig::bench, &BenchmarkSpec::delta_g));
    e.push_back(real("benchmark", "B", &RunConfig::bench, &BenchmarkSpec::B));
    e.push_back(real("benchmark", "charge", &RunConfig::bench, &BenchmarkSpec::charge));
    e.push_back(real("benchmark", "mass", &RunConfig::bench, &BenchmarkSpec::mass));
    e.push_back(real("benchmark", "e", &RunConfig::bench, &BenchmarkSpec::e));
    e.push_back(real("benchmark", "omega0", &RunConfig::bench, &BenchmarkSpec::omega0));
    e.push_back(real("benchmark", "t_end", &RunConfig::bench, &BenchmarkSpec::t_end));
    e.push_back({"benchmark", "max_steps", [](const RunConfig& c) { return std::to_string(c.max_steps); },
                 [](RunConfig& c, const std::string& v) { c.max_steps = to_long(v); }});
    e.push_back({"benchmark", "dump_times",
                 [](const RunConfig& c) {
                   std::string s;
                   for (std::size_t q = 0; q < c.dump_times.size(); ++q) {
                     if (q) s += ", ";
                     s += show(c.dump_times[q]);
                   }
                   return s;
                 },
                 [](RunConfig& c, const std::string& v) {
                   c.dump_times.clear();
                   std::stringstream ss(v);
                   std::string item;
                   while (std::getline(ss, item, ',')) {
                     item = trim(item);
                     if (!item.empty()) c.dump_times.push_back(to_double(item));
                   }
                 }});

    e.push_back({"cfl", "r", [](const RunConfig& c) { return show(c.bench.cfl.r); },
                 [](RunConfig& c, const std::string& v) { c.bench.cfl.r = to_double(v); }});
    e.push_back({"cfl", "theta", [](const RunConfig& c) { return show(c.bench.cfl.theta); },
                 [](RunConfig& c, const std::string& v) { c.bench.cfl.theta = to_double(v); }});
    e.push_back({"cfl", "z", [](const RunConfig& c) { return show(c.bench.cfl.z); },
                 [](RunConfig& c, const std::string& v) { c.bench.cfl.z = to_double(v); }});
    e.push_back({"cfl", "v", [](const RunConfig& c) { return show(c.bench.cfl.v); },
                 [](RunConfig& c, const std::string& v) { c.bench.cfl.v = to_double(v); }});
    e.push_back({"cfl", "dt_max", [](const RunConfig& c) { return show(c.bench.cfl.dt_max); },
                 [](RunConfig& c, const std::string& v) { c.bench.cfl.dt_max = to_double(v); }});

    e.push_back(integer("step1d", "cells", &RunConfig::step1d, &Step1dConfig::cells));
    e.push_back(real("step1d", "shift", &RunConfig::step1d, &Step1dConfig::shift));
    e.push_back(integer("step1d", "iterations", &RunConfig::step1d, &Step1dConfig::iterations));
    e.push_back(integer("step1d", "step_begin", &RunConfig::step1d, &Step1dConfig::step_begin));
    e.push_back(integer("step1d", "step_end", &RunConfig::step1d, &Step1dConfig::step_end));
    e.push_back(real("step1d", "height", &RunConfig::step1d, &Step1dConfig::height));
    e.push_back({"step1d", "schemes", [](const RunConfig& c) { return c.step1d.schemes; },
                 [](RunConfig& c, const std::string& v) { c.step1d.schemes = v; }});

    e.push_back(integer("rotation2d", "nr", &RunConfig::rotation, &Rotation2dConfig::nr));
    e.push_back(integer("rotation2d", "ntheta", &RunConfig::rotation, &Rotation2dConfig::ntheta));
    e.push_back(real("rotation2d", "r_min", &RunConfig::rotation, &Rotation2dConfig::r_min));
    e.push_back(real("rotation2d", "r_max", &RunConfig::rotation, &Rotation2dConfig::r_max));
    e.push_back(real("rotation2d", "B", &RunConfig::rotation, &Rotation2dConfig::B));
    e.push_back(real("rotation2d", "cfl", &RunConfig::rotation, &Rotation2dConfig::cfl));
    e.push_back(real("rotation2d", "revolutions", &RunConfig::rotation, &Rotation2dConfig::revolutions));
    e.push_back(real("rotation2d", "blob_r", &RunConfig::rotation, &Rotation2dConfig::blob_r));
    e.push_back(real("rotation2d", "blob_theta", &RunConfig::rotation, &Rotation2dConfig::blob_theta));
    e.push_back(real("rotation2d", "blob_width", &RunConfig::rotation, &Rotation2dConfig::blob_width));
    return e;
  }();
  return t;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig c;
  std::set<std::string> sections;
  for (const auto& e : table()) sections.insert(e.section);
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!sections.count(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError(where + "key '" + key + "' outside any section");
    const Entry* hit = nullptr;
    for (const auto& e : table()) {
      if (e.section == section && e.key == key) hit = &e;
    }
    if (hit == nullptr) {
      throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
    }
    if (!seen.insert(section + "." + key).second) {
      throw ConfigError(where + "duplicate key '" + key + "' in [" + section + "]");
    }
    try {
      hit->set(c, value);
    } catch (const ConfigError& err) {
      throw ConfigError(where + "[" + section + "] " + key + ": " + err.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string write_config(const RunConfig& c) {
  std::string out;
  std::string section;
  for (const auto& e : table()) {
    if (e.section != section) {
      if (!section.empty()) out += '\n';
      section = e.section;
      out += "[" + section + "]\n";
    }
    out += e.key + " = " + e.get(c) + "\n";
  }
  return out;
}

void validate(const RunConfig& c) {
  if (c.experiment != "step1d" && c.experiment != "rotation2d" && c.experiment != "driftkinetic") {
    throw ConfigError("unknown experiment '" + c.experiment + "'");
  }
  if (c.out.empty()) throw ConfigError("output directory must not be empty");
  if (c.stride < 1) throw ConfigError("stride must be at least 1");
  if (c.threads < 1) throw ConfigError("threads must be at least 1");
  if (c.dt < 0.0) throw ConfigError("dt must be non-negative");
  if (c.max_steps < 0) throw ConfigError("max_steps must be non-negative");
  validate(c.scheme);

  if (c.experiment == "step1d") {
    const auto& s = c.step1d;
    if (s.cells < 4) throw ConfigError("step1d needs at least 4 cells");
    if (!(std::fabs(s.shift) <= 1.0)) throw ConfigError("step1d shift must not exceed one cell");
    if (s.iterations < 1) throw ConfigError("step1d needs at least one iteration");
    if (s.step_begin < 0 || s.step_end > s.cells || s.step_begin >= s.step_end) {
      throw ConfigError("step1d step must be a non-empty cell range");
    }
    if (s.schemes != "all" && s.schemes != "psm" && s.schemes != "sls" && s.schemes != "upwind") {
      throw ConfigError("step1d schemes must be psm, sls, upwind or all");
    }
  } else if (c.experiment == "rotation2d") {
    const auto& r = c.rotation;
    if (r.nr < 4 || r.ntheta < 4) throw ConfigError("rotation2d needs at least 4 cells per axis");
    if (!(r.r_min > 0.0) || !(r.r_max > r.r_min)) throw ConfigError("rotation2d needs 0 < r_min < r_max");
    if (r.B == 0.0) throw ConfigError("rotation2d B must be nonzero");
    if (!(r.cfl > 0.0 && r.cfl <= 1.0)) throw ConfigError("rotation2d cfl must be in (0, 1]");
    if (!(r.revolutions > 0.0)) throw ConfigError("rotation2d revolutions must be positive");
    if (!(r.blob_width > 0.0)) throw ConfigError("rotation2d blob_width must be positive");
    if (c.scheme.scheme == Scheme::BSL) throw ConfigError("rotation2d runs the finite-volume form");
  } else {
    PhaseGrid4D g;
    try {
      g = c.grid.build();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
    validate(c.bench, g);
    for (double t : c.dump_times) {
      if (t < 0.0) throw ConfigError("dump times must be non-negative");
    }
  }
}

}  // namespace vpsm
