// Command-line front end: `cpp run`, `cpp certify`, `cpp presets`.
#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "tacp/harness/config.hpp"
#include "tacp/harness/experiment.hpp"

namespace {

using tacp::harness::ExperimentConfig;

// Flags mirror config-file keys; values given on the command line are
// applied after the file so they take precedence.
struct Overrides {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  std::vector<std::pair<std::string, CLI::Option*>> flags;

  void add_value(CLI::App* app, const std::string& key, const std::string& type, const std::string& help) {
    auto& slot = values.emplace_back(key, std::string());
    options.emplace_back(key, app->add_option("--" + key, slot.second, help)->type_name(type));
  }
  void add_flag(CLI::App* app, const std::string& key, const std::string& help) {
    flags.emplace_back(key, app->add_flag("--" + key, help));
  }

  ExperimentConfig resolve() const {
    ExperimentConfig config;
    if (!config_path.empty()) config = tacp::harness::load_config(config_path);
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (options[i].second->count() > 0) tacp::harness::apply_setting(config, values[i].first, values[i].second);
    }
    for (const auto& [key, opt] : flags) {
      if (opt->count() > 0) tacp::harness::apply_setting(config, key, "true");
    }
    return config;
  }
};

void add_common(CLI::App* app, Overrides& o) {
  o.values.reserve(16);
  app->add_option("--config", o.config_path, "key = value configuration file")->type_name("FILE");
  o.add_value(app, "mix", "NAME", "agent mix, or 'all'");
  o.add_value(app, "seed", "N", "problem seed");
  o.add_value(app, "n", "N", "plan dimension");
  o.add_value(app, "agents", "M", "number of agents");
  o.add_value(app, "alpha", "X", "diagonal shift of every Q_i");
  o.add_value(app, "r2", "X", "scale of the linear terms");
  o.add_value(app, "rho-p", "X", "rho of primal agents");
  o.add_value(app, "rho-d", "X", "rho of dual agents");
  o.add_value(app, "rho-x", "X", "rho of proximal agents");
  o.add_value(app, "preset", "NAME", "rho preset name, or 'all'");
  o.add_value(app, "max-iters", "N", "iteration cap per run");
  o.add_value(app, "tol", "X", "stopping tolerance");
  o.add_value(app, "out", "DIR", "output directory");
  o.add_value(app, "threads", "N", "threads for the agent updates");
}

int do_run(const Overrides& o) {
  const auto config = o.resolve();
  const auto outcome = tacp::harness::run_experiment(config);
  std::printf("%-16s %-14s %5s %9s %9s %24s\n", "mix", "setting", "accel", "iters", "converged", "rel_error");
  for (const auto& r : outcome.runs) {
    std::printf("%-16s %-14s %5d %9zu %9s %24.17g\n", r.mix.c_str(), r.setting.c_str(), r.accelerated ? 1 : 0,
                r.iterations, r.converged ? "yes" : "no", r.final_rel_error);
  }
  std::printf("wrote %zu traces and summary.csv to %s\n", outcome.runs.size(), config.out.c_str());
  return outcome.all_converged() ? 0 : 2;
}

int do_certify(const Overrides& o) {
  auto config = o.resolve();
  config.accelerate = false;
  const auto results = tacp::harness::run_certification(config);
  bool all_pass = true;
  bool all_converged = true;
  for (const auto& cs : results) {
    if (cs.assumption_violation) {
      std::printf("%-16s %-14s SKIPPED %s\n", cs.mix.c_str(), cs.setting.c_str(), cs.assumption_violation->c_str());
      all_pass = false;
      continue;
    }
    std::printf("%-16s %-14s %s iters=%zu tolerance=%.3g\n", cs.mix.c_str(), cs.setting.c_str(),
                cs.passed() ? "PASS" : "FAIL", cs.iterations, cs.tolerance);
    for (std::size_t i = 0; i < tacp::kCertificateCount; ++i) {
      const auto name = tacp::certificate_name(static_cast<tacp::Certificate>(i));
      std::printf("    %-22.*s worst slack %.6g\n", static_cast<int>(name.size()), name.data(), cs.worst[i]);
    }
    all_pass = all_pass && cs.passed();
    all_converged = all_converged && cs.converged;
  }
  if (!all_pass) return 1;
  return all_converged ? 0 : 2;
}

int do_presets() {
  std::printf("%-6s %8s %8s %8s\n", "name", "rho_p", "rho_d", "rho_x");
  for (const auto& p : tacp::harness::rho_presets()) {
    std::printf("%-6s %8g %8g %8g\n", p.name.c_str(), p.rho_p, p.rho_d, p.rho_x);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consensus planning with primal, dual and proximal agents"};
  app.require_subcommand(1);

  Overrides run_opts;
  auto* run = app.add_subcommand("run", "solve generated problems and write CSV traces");
  add_common(run, run_opts);
  run_opts.add_flag(run, "accelerate", "momentum with adaptive restart where the mix allows it");
  run_opts.add_flag(run, "emit-plot-script", "also write plot.gp for gnuplot");

  Overrides cert_opts;
  auto* certify = app.add_subcommand("certify", "check the convergence certificates along vanilla runs");
  add_common(certify, cert_opts);

  app.add_subcommand("presets", "list the built-in rho settings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return do_run(run_opts);
    if (certify->parsed()) return do_certify(cert_opts);
    return do_presets();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
