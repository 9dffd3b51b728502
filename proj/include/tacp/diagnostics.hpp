#ifndef TACP_DIAGNOSTICS_HPP
#define TACP_DIAGNOSTICS_HPP

// Convergence certificates for quadratic agents.
//
//   V^k = sum_i 1/(2 rho_i) ||lambda_i - lambda_i*||^2
//       + sum_{P u X} rho_i/2 ||z - z*||^2
//       + sum_P D_phi_i(x*, x_i)                  phi_i = 1/2 x^T (L I or H) x - g_i
//       + sum_D 1/2 (lambda_i - lambda_i*)^T Q_i^{-1} (lambda_i - lambda_i*)
//
//   r^k = sum_D [1/(2 rho_i) ||dlambda_i||^2 - 1/2 dlambda_i^T Q_i^{-1} dlambda_i]
//       + sum_{P u X} rho_i/2 ||z^{k-1} - x_i^k||^2
//       + sum_P D_phi_i(x_i^k, x_i^{k-1})
//
// The monitor checks, for every vanilla round k -> k+1,
//   V^{k+1} <= V^k, r^{k+1} >= 0, 0 <= gap^{k+1} <= V^k - V^{k+1} - r^{k+1},
//   the strong-convexity lower bounds on V^k - V^{k+1} - r^{k+1},
//   the two-step contraction V^{k+2} <= gamma V^k,
//   the one-step contraction when all agents share one kind,
//   and the O(1/K) bounds on the running averages.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tacp/agents.hpp"
#include "tacp/coordinator.hpp"
#include "tacp/errors.hpp"
#include "tacp/numerics.hpp"
#include "tacp/saddle_point.hpp"

namespace tacp {

inline constexpr double kCertificateSlack = 1e-9;

/// Metric of the primal Bregman term: L I - Q, or H - Q with the tighter bound.
inline SymmetricMatrix primal_bregman_metric(const AgentSpec& agent, const UpdateVariants& variants = {}) {
  agent.require_kind(AgentKind::Primal, "primal_bregman_metric");
  const auto& q = agent.quadratic().q();
  if (variants.tighter_bounds && agent.H()) return *agent.H() - q;
  return SymmetricMatrix::scaled_identity(q.dim(), agent.L()) - q;
}

/// D_phi(u, v) for a primal agent without forming the metric matrix.
inline double primal_bregman(const AgentSpec& agent, const UpdateVariants& variants, const Vector& u,
                             const Vector& v) {
  const Vector d = u - v;
  const double q_term = d.dot(agent.quadratic().q() * d);
  if (variants.tighter_bounds && agent.H()) return 0.5 * (d.dot(*agent.H() * d) - q_term);
  return 0.5 * (agent.L() * d.squaredNorm() - q_term);
}

inline void require_quadratic(std::span<const AgentSpec> agents, const char* op) {
  if (agents.empty()) fail(Errc::EmptyAgentList, std::string(op) + " over no agents");
  for (const auto& a : agents) {
    if (!a.is_quadratic()) {
      fail(Errc::OracleUnavailable, std::string(op) + " needs conjugate information only quadratic agents provide");
    }
  }
}

/// Preconditions of the certificates: quadratic agents, rho_i <= mu_i on dual
/// agents, vanilla dual updates.
inline void require_certifiable(std::span<const AgentSpec> agents, const UpdateVariants& variants = {}) {
  require_quadratic(agents, "certificate_check");
  if (variants.any_dual_variant()) {
    fail(Errc::AssumptionViolated, "certificates cover the plain dual update only");
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    if (a.kind() == AgentKind::Dual && a.rho() > a.mu() * (1.0 + kCurvatureTolerance)) {
      fail(Errc::AssumptionViolated, "dual agent " + std::to_string(i) + " has rho " + std::to_string(a.rho()) +
                                         " > mu " + std::to_string(a.mu()));
    }
  }
}

inline double lyapunov_V(const CoordinatorState& state, const SaddlePoint& saddle, std::span<const AgentSpec> agents,
                         const UpdateVariants& variants = {}) {
  require_quadratic(agents, "lyapunov_V");
  require_consistent(state, agents);
  double v = 0.0;
  const double z_dist = (state.z - saddle.z_star).squaredNorm();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    const Vector dl = state.lambda[i] - saddle.lambda_star[i];
    v += dl.squaredNorm() / (2.0 * a.rho());
    switch (a.kind()) {
      case AgentKind::Primal:
        v += 0.5 * a.rho() * z_dist;
        v += primal_bregman(a, variants, saddle.x_star[i], state.x[i]);
        break;
      case AgentKind::Proximal:
        v += 0.5 * a.rho() * z_dist;
        break;
      case AgentKind::Dual:
        v += 0.5 * a.quadratic().factor().inverse_quadratic_form(dl);
        break;
    }
  }
  return v;
}

/// Same quantity written as sum_i D_psi_i(lambda_i, lambda_i*) with
/// psi_i = -g_i* + ||.||^2/(2 rho_i); only meaningful when every agent is dual.
inline double lyapunov_V_all_dual(const CoordinatorState& state, const SaddlePoint& saddle,
                                  std::span<const AgentSpec> agents) {
  require_quadratic(agents, "lyapunov_V_all_dual");
  double v = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    agents[i].require_kind(AgentKind::Dual, "lyapunov_V_all_dual");
    // Hessian of psi is Q^{-1} + I / rho.
    const Vector dl = state.lambda[i] - saddle.lambda_star[i];
    const Vector curv = agents[i].quadratic().factor().solve(dl) + dl / agents[i].rho();
    v += 0.5 * dl.dot(curv);
  }
  return v;
}

inline double residual_r(const CoordinatorState& cur, const CoordinatorState& prev, std::span<const AgentSpec> agents,
                         const UpdateVariants& variants = {}, bool check_alternate = true) {
  require_quadratic(agents, "residual_r");
  require_consistent(cur, agents);
  require_consistent(prev, agents);
  double r = 0.0;
  bool has_dual = false;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    switch (a.kind()) {
      case AgentKind::Dual: {
        has_dual = true;
        const Vector dl = cur.lambda[i] - prev.lambda[i];
        r += dl.squaredNorm() / (2.0 * a.rho()) - 0.5 * a.quadratic().factor().inverse_quadratic_form(dl);
        break;
      }
      case AgentKind::Primal:
        r += 0.5 * a.rho() * (prev.z - cur.x[i]).squaredNorm();
        r += primal_bregman(a, variants, cur.x[i], prev.x[i]);
        break;
      case AgentKind::Proximal:
        r += 0.5 * a.rho() * (prev.z - cur.x[i]).squaredNorm();
        break;
    }
  }
  if (check_alternate && !has_dual) {
    // Without dual agents the consensus weights cancel the cross terms:
    // r = sum 1/(2 rho) ||dlambda||^2 + rho/2 ||dz||^2 + sum_P D_phi.
    double alt = 0.0;
    const double dz = (cur.z - prev.z).squaredNorm();
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const auto& a = agents[i];
      alt += (cur.lambda[i] - prev.lambda[i]).squaredNorm() / (2.0 * a.rho()) + 0.5 * a.rho() * dz;
      if (a.kind() == AgentKind::Primal) {
        alt += primal_bregman(a, variants, cur.x[i], prev.x[i]);
      }
    }
    if (std::abs(alt - r) > 1e-10 * (1.0 + std::abs(r) + std::abs(alt))) {
      fail(Errc::InvariantViolated, "residual forms disagree: " + std::to_string(r) + " vs " + std::to_string(alt));
    }
  }
  return r;
}

/// sum_i g_i(x_i) - sum_i g_i(z*) - lambda_i*^T (x_i - z*) + (sum lambda*)^T (z - z*),
/// evaluated through the exact quadratic expansion around z*.
inline double lagrangian_gap(const CoordinatorState& state, const SaddlePoint& saddle,
                             std::span<const AgentSpec> agents) {
  require_quadratic(agents, "lagrangian_gap");
  double gap = 0.0;
  Vector lambda_sum = Vector::Zero(state.dim());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    gap += bregman_quadratic(agents[i].quadratic().q(), state.x[i], saddle.z_star);
    lambda_sum += saddle.lambda_star[i];
  }
  return gap + lambda_sum.dot(state.z - saddle.z_star);
}

/// ||A z - x|| over the stacked copies.
inline double consensus_violation(const CoordinatorState& state) {
  double sq = 0.0;
  for (const auto& x : state.x) sq += (state.z - x).squaredNorm();
  return std::sqrt(sq);
}

inline double consensus_objective_value(std::span<const AgentSpec> agents, const Vector& z) {
  double f = 0.0;
  for (const auto& a : agents) f += objective_value(a, z);
  return f;
}

/// (f(z) - f(z*)) / |f(z*)| with f = sum_i g_i.
inline double relative_error(const Vector& z, std::span<const AgentSpec> agents, const SaddlePoint& saddle) {
  if (agents.empty()) fail(Errc::EmptyAgentList, "relative_error over no agents");
  const double f = consensus_objective_value(agents, z);
  const double f_star = consensus_objective_value(agents, saddle.z_star);
  if (std::abs(f_star) <= 1e-12 * (1.0 + std::abs(f))) {
    fail(Errc::ZeroOptimalValue, "relative error is undefined when f(z*) = 0");
  }
  return (f - f_star) / std::abs(f_star);
}

// ---------------------------------------------------------------------------
// Rate constants

struct RateConstants {
  double rho_min = 0.0;  // over all agents
  double rho_max = 0.0;
  /// Two-step contraction factor gamma in V^{k+2} <= gamma V^k.
  double two_step = 1.0;
  /// One-step factor when every agent has the same kind.
  std::optional<double> single_interface;
};

/// Largest eigenvalue of the Bregman metric: L - mu (or that of H - Q) for
/// primal agents, beta - mu otherwise.
inline double bregman_lipschitz(const AgentSpec& agent, const UpdateVariants& variants = {}) {
  if (agent.kind() == AgentKind::Primal) {
    return std::max(0.0, extreme_eigenvalue_bounds(primal_bregman_metric(agent, variants)).beta);
  }
  return agent.beta() - agent.mu();
}

inline RateConstants rate_constants(std::span<const AgentSpec> agents, const UpdateVariants& variants = {}) {
  require_quadratic(agents, "rate_constants");
  constexpr double inf = std::numeric_limits<double>::infinity();
  struct Group {
    bool any = false;
    double rho_min = inf, rho_max = 0.0, mu_min = inf, alpha = 0.0, l_phi_max = 0.0;
    void add(const AgentSpec& a, double l_phi) {
      any = true;
      rho_min = std::min(rho_min, a.rho());
      rho_max = std::max(rho_max, a.rho());
      mu_min = std::min(mu_min, a.mu());
      alpha = std::max(alpha, a.beta() + l_phi + a.rho());
      l_phi_max = std::max(l_phi_max, l_phi);
    }
  };
  Group all, primal, dual, proximal, coupled;  // coupled = primal u proximal
  for (const auto& a : agents) {
    const double l_phi = bregman_lipschitz(a, variants);
    all.add(a, l_phi);
    switch (a.kind()) {
      case AgentKind::Primal: primal.add(a, l_phi); coupled.add(a, l_phi); break;
      case AgentKind::Dual: dual.add(a, l_phi); break;
      case AgentKind::Proximal: proximal.add(a, l_phi); coupled.add(a, l_phi); break;
    }
  }
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : inf; };

  RateConstants rc;
  rc.rho_min = all.rho_min;
  rc.rho_max = all.rho_max;
  double m = all.rho_min / all.alpha;
  if (dual.any) m = std::min(m, dual.mu_min / dual.alpha);
  if (coupled.any) m = std::min(m, coupled.mu_min / coupled.rho_max);
  if (primal.any) m = std::min(m, ratio(primal.mu_min, primal.l_phi_max));
  rc.two_step = 1.0 / (1.0 + 0.5 * m);

  const int kinds = int(primal.any) + int(dual.any) + int(proximal.any);
  if (kinds == 1) {
    if (primal.any) {
      const double mp = std::min({primal.rho_min / primal.alpha, primal.mu_min / primal.rho_max,
                                  ratio(primal.mu_min, primal.l_phi_max)});
      rc.single_interface = 1.0 / (1.0 + mp / 3.0);
    } else if (dual.any) {
      rc.single_interface = 1.0 / (1.0 + 0.5 * std::min(dual.rho_min, dual.mu_min) / dual.alpha);
    } else {
      rc.single_interface =
          1.0 / (1.0 + 0.5 * std::min(proximal.rho_min / proximal.alpha, proximal.mu_min / proximal.rho_max));
    }
  }
  return rc;
}

// ---------------------------------------------------------------------------
// Per-iteration report

enum class Certificate {
  LyapunovDecrease,    // V^k - V^{k+1}
  ResidualNonnegative, // r^{k+1}
  GapNonnegative,      // gap^{k+1}
  GapBound,            // V^k - V^{k+1} - r^{k+1} - gap^{k+1}
  PlanDistanceBound,   // V^k - V^{k+1} - r^{k+1} - sum mu/2 ||x^{k+1} - x*||^2
  PriceDistanceBound,  // V^k - V^{k+1} - r^{k+1} - sum_D mu/(2 beta^2) ||lambda^k - lambda*||^2
  TwoStepContraction,  // gamma V^{k-1} - V^{k+1}
  SingleInterface,     // gamma_1 V^k - V^{k+1}
  ErgodicObjective,
  ErgodicFeasibility,
};
inline constexpr std::size_t kCertificateCount = 10;

constexpr std::string_view certificate_name(Certificate c) {
  switch (c) {
    case Certificate::LyapunovDecrease: return "lyapunov_decrease";
    case Certificate::ResidualNonnegative: return "residual_nonnegative";
    case Certificate::GapNonnegative: return "gap_nonnegative";
    case Certificate::GapBound: return "gap_bound";
    case Certificate::PlanDistanceBound: return "plan_distance_bound";
    case Certificate::PriceDistanceBound: return "price_distance_bound";
    case Certificate::TwoStepContraction: return "two_step_contraction";
    case Certificate::SingleInterface: return "single_interface";
    case Certificate::ErgodicObjective: return "ergodic_objective";
    case Certificate::ErgodicFeasibility: return "ergodic_feasibility";
  }
  return "unknown";
}

/// Quantities at state k (the state after the round) and the slack of every
/// inequality; +inf marks a check that does not apply at this k.
struct CertificateReport {
  std::size_t k = 0;
  double V = 0.0;
  double r = 0.0;
  double gap = 0.0;
  double feasibility = 0.0;
  std::array<double, kCertificateCount> slacks{};

  double slack(Certificate c) const { return slacks[static_cast<std::size_t>(c)]; }
  double& slack(Certificate c) { return slacks[static_cast<std::size_t>(c)]; }
  double worst_slack() const { return *std::min_element(slacks.begin(), slacks.end()); }
};

/// Streams vanilla rounds and reports every certificate as it becomes checkable.
class CertificateMonitor {
 public:
  CertificateMonitor(std::span<const AgentSpec> agents, SaddlePoint saddle, const CoordinatorState& initial,
                     UpdateVariants variants = {})
      : agents_(agents.begin(), agents.end()), saddle_(std::move(saddle)), variants_(variants) {
    require_certifiable(agents_, variants_);
    require_consistent(initial, agents_);
    rates_ = rate_constants(agents_, variants_);
    k0_ = initial.k;
    v_history_.push_back(lyapunov_V(initial, saddle_, agents_, variants_));
    x_sum_.assign(agents_.size(), Vector::Zero(initial.dim()));
    z_sum_ = Vector::Zero(initial.dim());
    double lambda_sq = 0.0;
    for (const auto& l : saddle_.lambda_star) lambda_sq += l.squaredNorm();
    lambda_star_norm_ = std::sqrt(lambda_sq);
  }

  double V0() const { return v_history_.front(); }
  double tolerance() const { return kCertificateSlack * (1.0 + V0()); }
  const RateConstants& rates() const { return rates_; }
  const SaddlePoint& saddle() const { return saddle_; }

  CertificateReport observe(const CoordinatorState& prev, const CoordinatorState& next) {
    if (next.k != prev.k + 1 || prev.k != k0_ + v_history_.size() - 1) {
      fail(Errc::InvalidConfig, "certificate monitor expects consecutive rounds");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    CertificateReport rep;
    rep.slacks.fill(inf);
    rep.k = next.k;
    rep.V = lyapunov_V(next, saddle_, agents_, variants_);
    rep.r = residual_r(next, prev, agents_, variants_);
    rep.gap = lagrangian_gap(next, saddle_, agents_);
    rep.feasibility = consensus_violation(next);

    const double v_prev = v_history_.back();
    const double budget = v_prev - rep.V - rep.r;
    double plan_term = 0.0;
    double price_term = 0.0;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      const auto& a = agents_[i];
      plan_term += 0.5 * a.mu() * (next.x[i] - saddle_.x_star[i]).squaredNorm();
      if (a.kind() == AgentKind::Dual) {
        price_term += 0.5 * a.mu() / (a.beta() * a.beta()) * (prev.lambda[i] - saddle_.lambda_star[i]).squaredNorm();
      }
    }
    rep.slack(Certificate::LyapunovDecrease) = v_prev - rep.V;
    rep.slack(Certificate::ResidualNonnegative) = rep.r;
    rep.slack(Certificate::GapNonnegative) = rep.gap;
    rep.slack(Certificate::GapBound) = budget - rep.gap;
    rep.slack(Certificate::PlanDistanceBound) = budget - plan_term;
    rep.slack(Certificate::PriceDistanceBound) = budget - price_term;
    if (v_history_.size() >= 2) {
      rep.slack(Certificate::TwoStepContraction) = rates_.two_step * v_history_[v_history_.size() - 2] - rep.V;
    }
    if (rates_.single_interface) {
      rep.slack(Certificate::SingleInterface) = *rates_.single_interface * v_prev - rep.V;
    }

    // Running averages over x^1 .. x^{K+1}.
    for (std::size_t i = 0; i < agents_.size(); ++i) x_sum_[i] += next.x[i];
    z_sum_ += next.z;
    const double count = static_cast<double>(v_history_.size());
    const Vector z_avg = z_sum_ / count;
    double objective_gap = 0.0;
    double infeasibility_sq = 0.0;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      const Vector x_avg = x_sum_[i] / count;
      const Vector d = x_avg - saddle_.x_star[i];
      objective_gap += saddle_.lambda_star[i].dot(d) + 0.5 * d.dot(agents_[i].quadratic().q() * d);
      infeasibility_sq += (z_avg - x_avg).squaredNorm();
    }
    const double c = 2.0 * V0();
    const double spread = 2.0 * std::sqrt(rates_.rho_max * c) / (rates_.rho_min * count);
    rep.slack(Certificate::ErgodicObjective) = c / (2.0 * count) + spread * lambda_star_norm_ - std::abs(objective_gap);
    rep.slack(Certificate::ErgodicFeasibility) = spread - std::sqrt(infeasibility_sq);

    v_history_.push_back(rep.V);
    return rep;
  }

 private:
  std::vector<AgentSpec> agents_;
  SaddlePoint saddle_;
  UpdateVariants variants_;
  RateConstants rates_;
  std::size_t k0_ = 0;
  std::vector<double> v_history_;
  std::vector<Vector> x_sum_;
  Vector z_sum_;
  double lambda_star_norm_ = 0.0;
};

/// Reports for every consecutive pair of a vanilla trace of states.
inline std::vector<CertificateReport> certificate_check(std::span<const CoordinatorState> states,
                                                        const SaddlePoint& saddle, std::span<const AgentSpec> agents,
                                                        const UpdateVariants& variants = {}) {
  if (states.empty()) return {};
  CertificateMonitor monitor(agents, saddle, states.front(), variants);
  std::vector<CertificateReport> reports;
  reports.reserve(states.size() - 1);
  for (std::size_t i = 1; i < states.size(); ++i) reports.push_back(monitor.observe(states[i - 1], states[i]));
  return reports;
}

}  // namespace tacp

#endif  // TACP_DIAGNOSTICS_HPP
