#ifndef TACP_HARNESS_PROBLEM_HPP
#define TACP_HARNESS_PROBLEM_HPP

// Random quadratic consensus problems
//   g_i(x) = 1/2 x^T Q_i x + b_i^T x,  Q_i = alpha I + A_i^T A_i,
//   A_i = r1_i (2 U_i - 1),  b_i = r2 u_i,
// with r1_i, the n x n entries of U_i and the n entries of u_i uniform on
// [0, 1). Draws come from std::mt19937_64 seeded with the problem seed; each
// 64-bit output w maps to (w >> 11) * 2^-53. Per agent the order is r1_i,
// then U_i row by row, then u_i.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tacp/agents.hpp"
#include "tacp/errors.hpp"
#include "tacp/numerics.hpp"

namespace tacp::harness {

class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct ProblemConfig {
  std::uint64_t seed = 42;
  int n = 50;
  int agents = 30;
  double alpha = 1.0;
  double r2 = 1e4;

  void validate() const {
    if (n < 1) fail(Errc::InvalidConfig, "n must be at least 1");
    if (agents < 1) fail(Errc::InvalidConfig, "agent count must be at least 1");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(Errc::InvalidConfig, "alpha must be positive");
    if (!std::isfinite(r2)) fail(Errc::InvalidConfig, "r2 must be finite");
  }
};

inline std::vector<QuadraticObjective> generate_objectives(const ProblemConfig& config) {
  config.validate();
  UniformSource rng(config.seed);
  const Eigen::Index n = config.n;
  std::vector<QuadraticObjective> out;
  out.reserve(static_cast<std::size_t>(config.agents));
  for (int i = 0; i < config.agents; ++i) {
    const double r1 = rng.next();
    Matrix a(n, n);
    for (Eigen::Index row = 0; row < n; ++row) {
      for (Eigen::Index col = 0; col < n; ++col) a(row, col) = r1 * (2.0 * rng.next() - 1.0);
    }
    Vector b(n);
    for (Eigen::Index j = 0; j < n; ++j) b(j) = config.r2 * rng.next();
    Matrix q = a.transpose() * a;
    q.diagonal().array() += config.alpha;
    out.emplace_back(SymmetricMatrix::symmetrized(q), std::move(b));
  }
  return out;
}

enum class Mix { AllPrimal, AllDual, AllProximal, Thirds, PrimalDual, PrimalProximal, DualProximal };

inline constexpr std::array<Mix, 7> kAllMixes{Mix::AllPrimal,  Mix::AllDual,        Mix::AllProximal, Mix::Thirds,
                                              Mix::PrimalDual, Mix::PrimalProximal, Mix::DualProximal};

constexpr std::string_view mix_name(Mix m) {
  switch (m) {
    case Mix::AllPrimal: return "all-primal";
    case Mix::AllDual: return "all-dual";
    case Mix::AllProximal: return "all-proximal";
    case Mix::Thirds: return "thirds";
    case Mix::PrimalDual: return "primal+dual";
    case Mix::PrimalProximal: return "primal+proximal";
    case Mix::DualProximal: return "dual+proximal";
  }
  return "unknown";
}

inline Mix parse_mix(std::string_view name) {
  for (Mix m : kAllMixes) {
    if (mix_name(m) == name) return m;
  }
  fail(Errc::ParseError, "unknown mix '" + std::string(name) + "'");
}

/// Agent counts per kind (primal, dual, proximal) for M agents.
inline std::array<int, 3> mix_counts(Mix mix, int m) {
  auto split = [&](int parts) {
    if (m % parts != 0) {
      fail(Errc::IndivisibleSplit, std::to_string(m) + " agents cannot be split into " + std::to_string(parts) +
                                       " equal groups for mix " + std::string(mix_name(mix)));
    }
    return m / parts;
  };
  switch (mix) {
    case Mix::AllPrimal: return {m, 0, 0};
    case Mix::AllDual: return {0, m, 0};
    case Mix::AllProximal: return {0, 0, m};
    case Mix::Thirds: { const int t = split(3); return {t, t, t}; }
    case Mix::PrimalDual: { const int h = split(2); return {h, h, 0}; }
    case Mix::PrimalProximal: { const int h = split(2); return {h, 0, h}; }
    case Mix::DualProximal: { const int h = split(2); return {0, h, h}; }
  }
  fail(Errc::InvalidConfig, "unknown mix");
}

struct RhoSetting {
  std::string name;
  double rho_p = 1.0;
  double rho_d = 1.0;
  double rho_x = 1.0;
};

inline const std::vector<RhoSetting>& rho_presets() {
  static const std::vector<RhoSetting> presets{
      {"p0.1", 0.1, 0.1, 0.1},
      {"p1", 1.0, 1.0, 1.0},
      {"p10", 10.0, 1.0, 10.0},
      {"p50", 50.0, 1.0, 50.0},
  };
  return presets;
}

inline RhoSetting find_preset(std::string_view name) {
  for (const auto& p : rho_presets()) {
    if (p.name == name) return p;
  }
  fail(Errc::ParseError, "unknown preset '" + std::string(name) + "'");
}

/// Kinds in index order: primal block, dual block, proximal block. Primal
/// agents get L = 1.01 beta.
inline std::vector<AgentSpec> assign_mix(const std::vector<QuadraticObjective>& objectives, Mix mix,
                                         const RhoSetting& rho) {
  if (objectives.empty()) fail(Errc::EmptyAgentList, "no objectives to assign");
  const auto counts = mix_counts(mix, static_cast<int>(objectives.size()));
  std::vector<AgentSpec> agents;
  agents.reserve(objectives.size());
  std::size_t i = 0;
  for (int c = 0; c < counts[0]; ++c, ++i) agents.push_back(make_primal_agent(objectives[i], rho.rho_p));
  for (int c = 0; c < counts[1]; ++c, ++i) agents.push_back(make_dual_agent(objectives[i], rho.rho_d));
  for (int c = 0; c < counts[2]; ++c, ++i) agents.push_back(make_proximal_agent(objectives[i], rho.rho_x));
  return agents;
}

inline std::vector<AgentSpec> generate_problem(const ProblemConfig& problem, Mix mix, const RhoSetting& rho) {
  return assign_mix(generate_objectives(problem), mix, rho);
}

}  // namespace tacp::harness

#endif  // TACP_HARNESS_PROBLEM_HPP
