#ifndef TACP_REFERENCE_HPP
#define TACP_REFERENCE_HPP

// Independent oracles used to check the coordinator: the direct solve of a
// quadratic consensus problem, and a numerical minimizer for the per-agent
// subproblem
//   argmin_x g(x) - lambda^T x + rho~/2 ||z - x||^2 + D_phi(x, anchor).
// The minimizer only evaluates g through its gradient and never touches the
// closed-form factorizations the coordinator uses.

#include <algorithm>
#include <optional>
#include <span>
#include <string>

#include "tacp/agents.hpp"
#include "tacp/coordinator.hpp"
#include "tacp/errors.hpp"
#include "tacp/numerics.hpp"
#include "tacp/saddle_point.hpp"

namespace tacp {

/// z* = -(sum Q_i)^{-1} sum b_i, x_i* = z*, lambda_i* = Q_i z* + b_i.
inline SaddlePoint direct_solve(std::span<const AgentSpec> agents) {
  if (agents.empty()) fail(Errc::EmptyAgentList, "direct_solve over no agents");
  const Eigen::Index n = agents.front().dim();
  Matrix q_sum = Matrix::Zero(n, n);
  Vector b_sum = Vector::Zero(n);
  for (const auto& agent : agents) {
    const auto& quad = agent.quadratic();
    require_same_size(n, quad.dim(), "direct_solve agent dimension");
    q_sum += quad.q().matrix();
    b_sum += quad.b();
  }
  const CholeskyFactor factor{SymmetricMatrix::symmetrized(q_sum)};
  Vector z = factor.solve(-b_sum);
  z += factor.solve(-b_sum - q_sum * z);  // one step of iterative refinement

  SaddlePoint saddle;
  saddle.z_star = z;
  saddle.x_star.assign(agents.size(), z);
  saddle.lambda_star.reserve(agents.size());
  Vector lambda_sum = Vector::Zero(n);
  double scale = b_sum.norm();
  for (const auto& agent : agents) {
    saddle.lambda_star.push_back(agent.quadratic().gradient(z));
    lambda_sum += saddle.lambda_star.back();
    scale = std::max(scale, saddle.lambda_star.back().norm());
  }
  if (lambda_sum.norm() > mixed_tolerance(1e-9, scale)) {
    fail(Errc::InvariantViolated, "saddle prices do not sum to zero");
  }
  return saddle;
}

/// Bregman term of the unified update: none, L/2 ||x||^2 - g, or 1/2 x^T H x - g.
struct BregmanMetric {
  enum class Kind { None, Spherical, Matrix } kind = Kind::None;
  double L = 0.0;
  std::optional<SymmetricMatrix> H;
};

struct UnifiedSubproblem {
  const AgentSpec* agent = nullptr;
  Vector lambda;
  Vector z;
  double rho_tilde = 0.0;
  BregmanMetric metric;
  Vector anchor;  // x^k, the point the Bregman term is centred on
};

struct BruteForceOptions {
  double gradient_tol = 1e-12;
  std::size_t max_iters = 2'000'000;
};

namespace detail {

inline Vector metric_apply(const BregmanMetric& metric, const Vector& x) {
  switch (metric.kind) {
    case BregmanMetric::Kind::None: return Vector::Zero(x.size());
    case BregmanMetric::Kind::Spherical: return metric.L * x;
    case BregmanMetric::Kind::Matrix: return metric.H->matrix() * x;
  }
  return Vector::Zero(x.size());
}

inline Vector unified_gradient(const UnifiedSubproblem& p, const Vector& x, const Vector& phi_grad_anchor) {
  Vector grad = objective_gradient(*p.agent, x) - p.lambda - p.rho_tilde * (p.z - x);
  if (p.metric.kind != BregmanMetric::Kind::None) {
    // grad phi(x) = M x - grad g(x)
    grad += metric_apply(p.metric, x) - objective_gradient(*p.agent, x) - phi_grad_anchor;
  }
  return grad;
}

}  // namespace detail

/// Gradient descent with a gradient-norm line search (step halves until the
/// gradient shrinks, then is allowed to grow again) until ||grad|| <= tol.
inline Vector brute_force_minimize(const UnifiedSubproblem& p, const BruteForceOptions& options = {}) {
  if (!p.agent) fail(Errc::InvalidConfig, "subproblem has no agent");
  const Eigen::Index n = p.agent->dim();
  if (n > 3) fail(Errc::InvalidConfig, "brute-force minimizer is meant for dimension <= 3");
  require_same_size(n, p.lambda.size(), "subproblem lambda");
  require_same_size(n, p.z.size(), "subproblem z");
  require_same_size(n, p.anchor.size(), "subproblem anchor");

  Vector phi_grad_anchor = Vector::Zero(n);
  if (p.metric.kind != BregmanMetric::Kind::None) {
    phi_grad_anchor = detail::metric_apply(p.metric, p.anchor) - objective_gradient(*p.agent, p.anchor);
  }

  Vector x = p.anchor;
  Vector g = detail::unified_gradient(p, x, phi_grad_anchor);
  double g_norm = g.norm();
  double step = 1.0;
  for (std::size_t it = 0; it < options.max_iters; ++it) {
    if (g_norm <= options.gradient_tol) return x;
    while (true) {
      const Vector trial = x - step * g;
      const Vector g_trial = detail::unified_gradient(p, trial, phi_grad_anchor);
      const double trial_norm = g_trial.norm();
      if (trial_norm < g_norm) {
        x = trial;
        g = g_trial;
        g_norm = trial_norm;
        step = std::min(step * 1.25, 1e6);
        break;
      }
      step *= 0.5;
      if (step < 1e-300) {
        fail(Errc::NoConvergence, "line search stalled at gradient norm " + std::to_string(g_norm));
      }
    }
  }
  fail(Errc::NoConvergence, "brute-force minimizer hit its iteration cap");
}

/// Numerical counterpart of the coordinator's agent update for `agent`:
/// primal -> rho~ = rho with the L (or H) Bregman term centred on x,
/// dual -> rho~ = 0 and no Bregman term, proximal -> rho~ = rho.
/// Regularized dual agents are solved in two stages: the dual response x~,
/// then the linearized subproblem centred on x~ with weight L.
inline Vector brute_force_unified_update(const AgentSpec& agent, const Vector& x, const Vector& z,
                                         const Vector& lambda, const UpdateVariants& variants = {},
                                         const BruteForceOptions& options = {}) {
  UnifiedSubproblem p;
  p.agent = &agent;
  p.lambda = lambda;
  p.z = z;
  p.anchor = x;
  switch (agent.kind()) {
    case AgentKind::Primal:
      p.rho_tilde = agent.rho();
      if (variants.tighter_bounds && agent.H()) {
        p.metric = {BregmanMetric::Kind::Matrix, 0.0, agent.H()};
      } else {
        p.metric = {BregmanMetric::Kind::Spherical, agent.L(), std::nullopt};
      }
      return brute_force_minimize(p, options);
    case AgentKind::Dual: {
      p.rho_tilde = 0.0;
      const Vector response = brute_force_minimize(p, options);
      if (!(variants.regularized_dual && agent.regularized_L())) return response;
      UnifiedSubproblem lin = p;
      lin.rho_tilde = agent.rho();
      lin.anchor = response;
      lin.metric = {BregmanMetric::Kind::Spherical, *agent.regularized_L(), std::nullopt};
      return brute_force_minimize(lin, options);
    }
    case AgentKind::Proximal:
      p.rho_tilde = agent.rho();
      return brute_force_minimize(p, options);
  }
  fail(Errc::WrongKind, "unknown agent kind");
}

}  // namespace tacp

#endif  // TACP_REFERENCE_HPP
