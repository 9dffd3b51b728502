#ifndef TACP_HARNESS_EXPERIMENT_HPP
#define TACP_HARNESS_EXPERIMENT_HPP

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tacp/acceleration.hpp"
#include "tacp/diagnostics.hpp"
#include "tacp/harness/config.hpp"
#include "tacp/harness/problem.hpp"
#include "tacp/harness/trace.hpp"
#include "tacp/reference.hpp"
#include "tacp/solve.hpp"

namespace tacp::harness {

struct RunSummary {
  std::string mix;
  std::string setting;
  RhoSetting rho;
  bool accelerated = false;
  bool converged = false;
  std::size_t iterations = 0;
  std::optional<std::size_t> iters_to_1e6;
  std::optional<std::size_t> iters_to_1e8;
  double final_rel_error = 0.0;
  std::size_t restarts = 0;
  std::string trace_file;
};

struct SingleRun {
  RunSummary summary;
  std::vector<TraceRow> trace;
  RunResult result;
};

inline std::string run_stem(Mix mix, const RhoSetting& rho) { return std::string(mix_name(mix)) + "_" + rho.name; }

inline SolveConfig solve_config_for(const ExperimentConfig& config, bool accelerated) {
  SolveConfig sc;
  sc.max_iters = config.max_iters;
  sc.primal_tol = config.tol;
  sc.dual_tol = config.tol;
  sc.acceleration = accelerated;
  sc.threads = config.threads;
  return sc;
}

/// One (mix, setting) run with a trace row per round. Acceleration falls
/// back to the vanilla loop for mixes it does not support.
inline SingleRun run_single(const std::vector<QuadraticObjective>& objectives, Mix mix, const RhoSetting& rho,
                            const ExperimentConfig& config) {
  const auto agents = assign_mix(objectives, mix, rho);
  const auto saddle = direct_solve(agents);
  const bool accelerated = config.accelerate && acceleration_supported(agents);

  SingleRun run;
  run.summary.mix = std::string(mix_name(mix));
  run.summary.setting = rho.name;
  run.summary.rho = rho;
  run.summary.accelerated = accelerated;

  auto observer = [&](const CoordinatorState& prev, const CoordinatorState& next, const IterationRecord& rec) {
    TraceRow row;
    row.k = next.k;
    row.objective = consensus_objective_value(agents, next.z);
    row.rel_error = relative_error(next.z, agents, saddle);
    row.primal_res = rec.primal_residual;
    row.dual_res = rec.dual_residual;
    row.V = lyapunov_V(next, saddle, agents);
    row.r = residual_r(next, prev, agents, {}, !accelerated);
    row.restart = rec.restarted;
    if (!run.summary.iters_to_1e6 && row.rel_error <= 1e-6) run.summary.iters_to_1e6 = row.k;
    if (!run.summary.iters_to_1e8 && row.rel_error <= 1e-8) run.summary.iters_to_1e8 = row.k;
    run.trace.push_back(row);
  };
  run.result = solve(agents, solve_config_for(config, accelerated), observer);
  run.summary.converged = run.result.converged;
  run.summary.iterations = run.result.iterations;
  run.summary.restarts = run.result.restarts;
  run.summary.final_rel_error = run.trace.empty() ? relative_error(run.result.state.z, agents, saddle)
                                                  : run.trace.back().rel_error;
  return run;
}

inline constexpr const char* kSummaryHeader =
    "mix,setting,rho_p,rho_d,rho_x,accelerated,converged,iterations,iters_to_1e-6,iters_to_1e-8,final_rel_error,"
    "restarts";

inline void write_summary(std::ostream& os, const std::vector<RunSummary>& runs) {
  auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); };
  os << kSummaryHeader << '\n';
  for (const auto& s : runs) {
    os << s.mix << ',' << s.setting << ',' << format_real(s.rho.rho_p) << ',' << format_real(s.rho.rho_d) << ','
       << format_real(s.rho.rho_x) << ',' << (s.accelerated ? 1 : 0) << ',' << (s.converged ? 1 : 0) << ','
       << s.iterations << ',' << opt(s.iters_to_1e6) << ',' << opt(s.iters_to_1e8) << ','
       << format_real(s.final_rel_error) << ',' << s.restarts << '\n';
  }
}

/// gnuplot script: one semilog panel of relative error per rho setting.
inline void write_plot_script(std::ostream& os, const std::vector<RunSummary>& runs) {
  os << "set datafile separator ','\n"
        "set logscale y\n"
        "set xlabel 'iteration'\n"
        "set ylabel 'relative error'\n"
        "set key outside right\n"
        "set terminal pngcairo size 1000,600\n";
  std::vector<std::string> settings;
  for (const auto& r : runs) {
    if (std::find(settings.begin(), settings.end(), r.setting) == settings.end()) settings.push_back(r.setting);
  }
  for (const auto& setting : settings) {
    os << "set output '" << setting << ".png'\n"
       << "set title '" << setting << "'\n"
       << "plot";
    bool first = true;
    for (const auto& r : runs) {
      if (r.setting != setting) continue;
      os << (first ? " " : ", \\\n     ") << "'" << r.trace_file << "' using 1:3 every ::1 with lines title '"
         << r.mix << "'";
      first = false;
    }
    os << "\n";
  }
}

struct ExperimentOutcome {
  std::vector<RunSummary> runs;
  bool all_converged() const {
    return std::all_of(runs.begin(), runs.end(), [](const RunSummary& r) { return r.converged; });
  }
};

inline void write_text_file(const std::filesystem::path& path, const auto& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write '" + path.string() + "'");
  writer(out);
  if (!out) fail(Errc::IoError, "error while writing '" + path.string() + "'");
}

/// Runs every requested (mix, setting) pair, writing `<mix>_<setting>.csv`
/// per run and `summary.csv` (also on error, with the runs finished so far).
inline ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::filesystem::path dir(config.out);
  std::filesystem::create_directories(dir);
  const auto objectives = generate_objectives(config.problem);

  ExperimentOutcome outcome;
  auto flush_summary = [&] {
    write_text_file(dir / "summary.csv", [&](std::ostream& os) { write_summary(os, outcome.runs); });
  };
  try {
    for (const auto& rho : config.settings()) {
      for (Mix mix : config.mixes()) {
        auto run = run_single(objectives, mix, rho, config);
        run.summary.trace_file = run_stem(mix, rho) + ".csv";
        write_text_file(dir / run.summary.trace_file, [&](std::ostream& os) { write_trace(os, run.trace); });
        outcome.runs.push_back(std::move(run.summary));
      }
    }
  } catch (...) {
    flush_summary();
    throw;
  }
  flush_summary();
  if (config.emit_plot_script) {
    write_text_file(dir / "plot.gp", [&](std::ostream& os) { write_plot_script(os, outcome.runs); });
  }
  return outcome;
}

// ---------------------------------------------------------------------------
// Certification

struct CertificationSummary {
  std::string mix;
  std::string setting;
  std::size_t iterations = 0;
  bool converged = false;
  double tolerance = 0.0;  // 1e-9 (1 + V^0)
  std::array<double, kCertificateCount> worst{};
  std::optional<std::string> assumption_violation;

  bool passed() const {
    if (assumption_violation) return false;
    return std::all_of(worst.begin(), worst.end(), [&](double s) { return s >= -tolerance; });
  }
};

/// Vanilla run of one (mix, setting) pair with every certificate checked per round.
inline CertificationSummary certify_single(const std::vector<QuadraticObjective>& objectives, Mix mix,
                                           const RhoSetting& rho, const ExperimentConfig& config) {
  CertificationSummary cs;
  cs.mix = std::string(mix_name(mix));
  cs.setting = rho.name;
  cs.worst.fill(std::numeric_limits<double>::infinity());
  const auto agents = assign_mix(objectives, mix, rho);
  const auto initial = initialize(agents);
  std::optional<CertificateMonitor> monitor;
  try {
    monitor.emplace(agents, direct_solve(agents), initial);
  } catch (const Error& e) {
    if (e.code() != Errc::AssumptionViolated) throw;
    cs.assumption_violation = e.what();
    return cs;
  }
  cs.tolerance = monitor->tolerance();
  auto observer = [&](const CoordinatorState& prev, const CoordinatorState& next, const IterationRecord&) {
    const auto rep = monitor->observe(prev, next);
    for (std::size_t i = 0; i < kCertificateCount; ++i) cs.worst[i] = std::min(cs.worst[i], rep.slacks[i]);
  };
  const auto result = solve(agents, solve_config_for(config, false), initial, observer);
  cs.iterations = result.iterations;
  cs.converged = result.converged;
  return cs;
}

inline std::vector<CertificationSummary> run_certification(const ExperimentConfig& config) {
  config.validate();
  const auto objectives = generate_objectives(config.problem);
  std::vector<CertificationSummary> out;
  for (const auto& rho : config.settings()) {
    for (Mix mix : config.mixes()) out.push_back(certify_single(objectives, mix, rho, config));
  }
  return out;
}

}  // namespace tacp::harness

#endif  // TACP_HARNESS_EXPERIMENT_HPP
