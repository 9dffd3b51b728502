#ifndef TACP_COORDINATOR_HPP
#define TACP_COORDINATOR_HPP

// One round of three-agent consensus planning:
//   1. agent updates  x_i^{k+1}  (primal: linearized step, dual: price response,
//                                 proximal: augmented-Lagrangian response)
//   2. consensus      z^{k+1} = sum_i rho_i x_i^{k+1} / sum_i rho_i
//   3. prices         lambda_i^{k+1} = lambda_i^k + rho_i (z^{k+1} - x_i^{k+1})
// Phase 1 reads only round-k values and may run on several threads; phases 2
// and 3 reduce in agent-index order so results do not depend on the thread count.

#include <cmath>
#include <cstddef>
#include <exception>
#include <span>
#include <string>
#include <vector>

#include "tacp/agents.hpp"
#include "tacp/errors.hpp"
#include "tacp/numerics.hpp"

namespace tacp {

struct CoordinatorState {
  std::vector<Vector> x;       // per-agent plans x_i^k
  Vector z;                    // consensus plan z^k
  std::vector<Vector> lambda;  // per-agent prices lambda_i^k
  std::size_t k = 0;

  std::size_t agent_count() const { return x.size(); }
  Eigen::Index dim() const { return z.size(); }
};

/// || sum_i lambda_i ||, zero in exact arithmetic at every round.
inline double price_sum_norm(const CoordinatorState& state) {
  Vector sum = Vector::Zero(state.dim());
  for (const auto& l : state.lambda) sum += l;
  return sum.norm();
}

inline bool price_sum_invariant_holds(const CoordinatorState& state, double a = 1e-9) {
  double max_norm = 0.0;
  for (const auto& l : state.lambda) max_norm = std::max(max_norm, l.norm());
  return price_sum_norm(state) <= mixed_tolerance(a, max_norm);
}

inline bool state_is_finite(const CoordinatorState& state) {
  if (!state.z.allFinite()) return false;
  for (const auto& v : state.x) {
    if (!v.allFinite()) return false;
  }
  for (const auto& v : state.lambda) {
    if (!v.allFinite()) return false;
  }
  return true;
}

/// Opt-in update variants. An agent uses a variant only when the switch is on
/// here and the agent carries the matching settings (H, regularized L, epsilon).
struct UpdateVariants {
  bool second_order_dual = false;
  bool regularized_dual = false;
  bool tighter_bounds = false;

  bool any_dual_variant() const { return second_order_dual || regularized_dual; }
};

struct AccelerationOptions {
  double eta = 0.999;
  /// Forces the extrapolation weight to 0; the accelerated loop then replays vanilla rounds.
  bool zero_momentum = false;
  /// Also restart when f(z) increases between rounds.
  bool objective_restart = false;
};

struct SolveConfig {
  std::size_t max_iters = 20000;
  double primal_tol = 1e-8;
  double dual_tol = 1e-8;
  bool acceleration = false;
  AccelerationOptions accel;
  UpdateVariants variants;
  int threads = 1;

  void validate() const {
    if (max_iters < 1) fail(Errc::InvalidConfig, "max_iters must be at least 1");
    if (!(primal_tol > 0.0) || !(dual_tol > 0.0)) fail(Errc::InvalidConfig, "tolerances must be positive");
    if (threads < 1) fail(Errc::InvalidConfig, "threads must be at least 1");
    if (!(accel.eta > 0.0)) fail(Errc::InvalidConfig, "restart eta must be positive");
  }
};

/// sqrt(mu beta) for primal and proximal agents, mu for dual agents.
inline double default_rho(double mu, double beta, AgentKind kind) {
  if (!(mu > 0.0) || !(beta >= mu) || !std::isfinite(beta)) {
    fail(Errc::InvalidCurvature, "default_rho needs 0 < mu <= beta < inf");
  }
  return kind == AgentKind::Dual ? mu : std::sqrt(mu * beta);
}

/// Agent with rho chosen by default_rho from its own curvature bounds.
inline AgentSpec make_agent(AgentKind kind, Objective objective, AgentOptions options = {}) {
  const auto [mu, beta] = std::visit(
      [](const auto& obj) -> std::pair<double, double> {
        if constexpr (std::is_same_v<std::decay_t<decltype(obj)>, QuadraticObjective>) {
          return {obj.mu(), obj.beta()};
        } else {
          return {obj.mu, obj.beta};
        }
      },
      objective);
  return AgentSpec(kind, std::move(objective), default_rho(mu, beta, kind), std::move(options));
}

inline CoordinatorState initialize(std::span<const AgentSpec> agents, Eigen::Index n) {
  if (agents.empty()) fail(Errc::EmptyAgentList, "at least one agent is required");
  if (n < 1) fail(Errc::DimensionMismatch, "plan dimension must be at least 1");
  for (const auto& agent : agents) require_same_size(n, agent.dim(), "agent dimension");
  CoordinatorState state;
  state.x.assign(agents.size(), Vector::Zero(n));
  state.lambda.assign(agents.size(), Vector::Zero(n));
  state.z = Vector::Zero(n);
  state.k = 0;
  return state;
}

inline CoordinatorState initialize(std::span<const AgentSpec> agents) {
  if (agents.empty()) fail(Errc::EmptyAgentList, "at least one agent is required");
  return initialize(agents, agents.front().dim());
}

// ---------------------------------------------------------------------------
// Agent updates

/// Minimizer of the linearized subproblem
///   g(x^k) + grad g(x^k)^T x + L/2 ||x - x^k||^2 - lambda^T x + rho/2 ||z - x||^2.
inline Vector primal_agent_step(const AgentSpec& agent, const Vector& x, const Vector& z, const Vector& lambda) {
  agent.require_kind(AgentKind::Primal, "primal_agent_step");
  require_same_size(x.size(), z.size(), "primal_agent_step");
  require_same_size(x.size(), lambda.size(), "primal_agent_step");
  const auto oracle = primal_oracle(agent, x);
  const double l = agent.L();
  const double rho = agent.rho();
  // Same closed form written as a correction to x, which keeps agreeing plans exact.
  return x + (rho * (z - x) - (oracle.gradient - lambda)) / (l + rho);
}

/// Same step with the quadratic majorant 1/2 x^T H x in place of L/2 ||x||^2:
///   (H + rho I)^{-1} (H x - grad g(x) + rho z + lambda).
inline Vector generalized_primal_step(const AgentSpec& agent, const Vector& x, const Vector& z,
                                      const Vector& lambda) {
  agent.require_kind(AgentKind::Primal, "generalized_primal_step");
  if (!agent.H()) fail(Errc::InvalidHyperparameter, "generalized_primal_step needs a majorant H");
  require_same_size(x.size(), z.size(), "generalized_primal_step");
  require_same_size(x.size(), lambda.size(), "generalized_primal_step");
  const auto oracle = primal_oracle(agent, x);
  const Vector rhs = agent.H()->matrix() * x - oracle.gradient + agent.rho() * z + lambda;
  return agent.h_shift_factor().solve(rhs);
}

/// Dual response x~ = argmin g - lambda^T x pulled towards the consensus:
/// (L x~ + rho z) / (L + rho).
inline Vector regularized_dual_step(const AgentSpec& agent, const Vector& z, const Vector& lambda) {
  agent.require_kind(AgentKind::Dual, "regularized_dual_step");
  if (!agent.regularized_L()) {
    fail(Errc::InvalidHyperparameter, "regularized_dual_step needs an agent with regularized_dual set");
  }
  require_same_size(z.size(), lambda.size(), "regularized_dual_step");
  const Vector response = dual_oracle(agent, lambda);
  const double l = *agent.regularized_L();
  const double rho = agent.rho();
  return (l * response + rho * z) / (l + rho);
}

/// Phase-1 update of one agent under the active variants.
inline Vector agent_update(const AgentSpec& agent, const Vector& x, const Vector& z, const Vector& lambda,
                           const UpdateVariants& variants) {
  switch (agent.kind()) {
    case AgentKind::Primal:
      if (variants.tighter_bounds && agent.H()) return generalized_primal_step(agent, x, z, lambda);
      return primal_agent_step(agent, x, z, lambda);
    case AgentKind::Dual:
      if (variants.regularized_dual && agent.regularized_L()) return regularized_dual_step(agent, z, lambda);
      return dual_oracle(agent, lambda);
    case AgentKind::Proximal:
      return proximal_oracle(agent, lambda, z, agent.rho());
  }
  fail(Errc::WrongKind, "unknown agent kind");
}

// ---------------------------------------------------------------------------
// Consensus and prices

inline Vector consensus_step(std::span<const AgentSpec> agents, std::span<const Vector> x_new) {
  if (agents.empty()) fail(Errc::EmptyAgentList, "consensus over no agents");
  require_same_size(static_cast<Eigen::Index>(agents.size()), static_cast<Eigen::Index>(x_new.size()),
                    "consensus_step plans per agent");
  const Eigen::Index n = x_new.front().size();
  // Averaged as offsets from the first plan so near-agreeing plans lose no digits.
  const Vector& base = x_new.front();
  Vector weighted = Vector::Zero(n);
  double total = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    require_same_size(n, x_new[i].size(), "consensus_step plan");
    weighted += agents[i].rho() * (x_new[i] - base);
    total += agents[i].rho();
  }
  return base + weighted / total;
}

inline Vector price_step(const AgentSpec& agent, const Vector& lambda, const Vector& z_new, const Vector& x_new) {
  require_same_size(lambda.size(), z_new.size(), "price_step");
  require_same_size(lambda.size(), x_new.size(), "price_step");
  return lambda + agent.rho() * (z_new - x_new);
}

inline bool uses_second_order_price(const AgentSpec& agent, const UpdateVariants& variants) {
  return variants.second_order_dual && agent.kind() == AgentKind::Dual && agent.epsilon().has_value();
}

/// Newton-like price update lambda + rho (Hessian(x+) + eps I)(z+ - x+).
inline Vector second_order_price_step(const AgentSpec& agent, const Vector& lambda, const Vector& z_new,
                                      const Vector& x_new) {
  agent.require_kind(AgentKind::Dual, "second_order_price_step");
  if (!agent.epsilon()) {
    fail(Errc::InvalidHyperparameter, "second_order_price_step needs an agent with second_order_dual set");
  }
  require_same_size(lambda.size(), z_new.size(), "second_order_price_step");
  require_same_size(lambda.size(), x_new.size(), "second_order_price_step");
  const SymmetricMatrix hess = agent_hessian(agent, x_new);
  return lambda + agent.rho() * (hess.matrix() * (z_new - x_new) + *agent.epsilon() * (z_new - x_new));
}

/// Per-agent consensus weight: rho (Hessian + eps I) for second-order dual agents, rho I otherwise.
inline Matrix consensus_weight(const AgentSpec& agent, const Vector& x_new, const UpdateVariants& variants) {
  const Eigen::Index n = x_new.size();
  if (uses_second_order_price(agent, variants)) {
    Matrix w = agent_hessian(agent, x_new).matrix();
    w.diagonal().array() += *agent.epsilon();
    return agent.rho() * w;
  }
  return agent.rho() * Matrix::Identity(n, n);
}

/// z = (sum_i H_i)^{-1} sum_i H_i x_i, the consensus matching second-order prices.
inline Vector weighted_consensus_step(std::span<const AgentSpec> agents, std::span<const Vector> x_new,
                                      const UpdateVariants& variants = {.second_order_dual = true}) {
  if (agents.empty()) fail(Errc::EmptyAgentList, "consensus over no agents");
  require_same_size(static_cast<Eigen::Index>(agents.size()), static_cast<Eigen::Index>(x_new.size()),
                    "weighted_consensus_step plans per agent");
  const Eigen::Index n = x_new.front().size();
  Matrix total = Matrix::Zero(n, n);
  Vector weighted = Vector::Zero(n);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    require_same_size(n, x_new[i].size(), "weighted_consensus_step plan");
    const Matrix w = consensus_weight(agents[i], x_new[i], variants);
    total += w;
    weighted += w * x_new[i];
  }
  return spd_solve(SymmetricMatrix::symmetrized(total), weighted);
}

// ---------------------------------------------------------------------------
// Full round

inline void require_consistent(const CoordinatorState& state, std::span<const AgentSpec> agents) {
  if (agents.empty()) fail(Errc::EmptyAgentList, "at least one agent is required");
  if (state.x.size() != agents.size() || state.lambda.size() != agents.size()) {
    fail(Errc::DimensionMismatch, "state holds " + std::to_string(state.x.size()) + " plans for " +
                                      std::to_string(agents.size()) + " agents");
  }
  const Eigen::Index n = state.dim();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    require_same_size(n, agents[i].dim(), "agent dimension");
    require_same_size(n, state.x[i].size(), "plan dimension");
    require_same_size(n, state.lambda[i].size(), "price dimension");
  }
}

/// Phase 1 only: every agent's new plan from round-k values.
inline std::vector<Vector> agent_updates(const CoordinatorState& state, std::span<const AgentSpec> agents,
                                         const UpdateVariants& variants, int threads = 1) {
  const auto m = static_cast<std::ptrdiff_t>(agents.size());
  std::vector<Vector> x_new(agents.size());
  std::vector<std::exception_ptr> errors(agents.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
#endif
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    try {
      x_new[i] = agent_update(agents[i], state.x[i], state.z, state.lambda[i], variants);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  (void)threads;
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return x_new;
}

inline CoordinatorState iterate(const CoordinatorState& state, std::span<const AgentSpec> agents,
                                const SolveConfig& config = {}) {
  require_consistent(state, agents);
  const auto& variants = config.variants;

  CoordinatorState next;
  next.x = agent_updates(state, agents, variants, config.threads);
  next.z = variants.second_order_dual ? weighted_consensus_step(agents, next.x, variants)
                                      : consensus_step(agents, next.x);
  next.lambda.resize(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    next.lambda[i] = uses_second_order_price(agents[i], variants)
                         ? second_order_price_step(agents[i], state.lambda[i], next.z, next.x[i])
                         : price_step(agents[i], state.lambda[i], next.z, next.x[i]);
  }
  next.k = state.k + 1;
  return next;
}

}  // namespace tacp

#endif  // TACP_COORDINATOR_HPP
