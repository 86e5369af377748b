// vpsm command-line driver.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vpsm/config.hpp"
#include "vpsm/error.hpp"
#include "vpsm/experiments.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> out, scheme, form;
  std::optional<double> K;
  std::optional<int> threads;
  std::optional<unsigned long> seed;
};

void add_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "run configuration file");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--scheme", o.scheme, "bsl | psm | sls (step1d: psm | sls | upwind | all)");
  cmd->add_option("--form", o.form, "split | fv");
  cmd->add_option("--K", o.K, "SLS limiter constant");
  cmd->add_option("--threads", o.threads, "worker threads");
  cmd->add_option("--seed", o.seed, "seed for randomized drivers");
}

vpsm::RunConfig resolve(const std::string& experiment, const Overrides& o) {
  vpsm::RunConfig c;
  if (!o.config.empty()) {
    c = vpsm::load_config(o.config);
    if (c.experiment != experiment) {
      // The subcommand decides the experiment.
      c.experiment = experiment;
    }
  } else {
    c.experiment = experiment;
    c.out = "out/" + experiment;
    if (experiment == "step1d" || experiment == "rotation2d") c.stride = 1;
  }
  if (o.out) c.out = *o.out;
  if (o.scheme) {
    if (experiment == "step1d") {
      c.step1d.schemes = *o.scheme;
      if (*o.scheme == "sls" || *o.scheme == "psm") c.scheme.scheme = vpsm::parse_scheme(*o.scheme);
    } else {
      c.scheme.scheme = vpsm::parse_scheme(*o.scheme);
    }
  }
  if (o.form) c.scheme.form = vpsm::parse_form(*o.form);
  if (o.K) c.scheme.K = *o.K;
  if (o.threads) c.threads = *o.threads;
  if (o.seed) c.seed = *o.seed;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservative semi-Lagrangian transport experiments"};
  app.require_subcommand(1);
  Overrides o;
  CLI::App* step = app.add_subcommand("step1d", "periodic step transport (PSM, SLS, upwind)");
  CLI::App* rot = app.add_subcommand("rotation2d", "finite-volume solid-body rotation");
  CLI::App* dk = app.add_subcommand("driftkinetic", "4D drift-kinetic benchmark");
  for (auto* cmd : {step, rot, dk}) add_flags(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    const vpsm::RunConfig c = resolve(experiment, o);
    vpsm::run_experiment(c);
    std::cout << "wrote " << c.out << '\n';
  } catch (const vpsm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const vpsm::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
