#ifndef TACP_ACCELERATION_HPP
#define TACP_ACCELERATION_HPP

// Nesterov-style momentum on (z, lambda) with residual-based adaptive restart.
//
// Each accelerated round runs the ordinary three-phase round from the
// extrapolated point (z_hat, lambda_hat), then
//   alpha_{k+1} = (1 + sqrt(1 + 4 alpha_k^2)) / 2
//   (z_hat, lambda_hat) <- (z, lambda)_{k+1} + (alpha_k - 1)/alpha_{k+1} * ((z, lambda)_{k+1} - (z, lambda)_k)
// unless the combined residual
//   c = (1/rho) sum_i ||lambda_i - lambda_hat_i||^2 + rho ||z - z_hat||^2   (rho = mean rho_i)
// grew past eta times its previous value, in which case alpha is reset to 1
// and the extrapolation is dropped.
//
// Supported mixes: any combination of dual and proximal agents, or primal
// agents alone. Primal agents mixed with other kinds are rejected.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "tacp/agents.hpp"
#include "tacp/coordinator.hpp"

namespace tacp {

struct MomentumState {
  double alpha = 1.0;
  Vector z_hat;
  std::vector<Vector> lambda_hat;
  double c = std::numeric_limits<double>::infinity();
  std::size_t restarts = 0;
  bool restarted = false;  // set by the round that just ran
  double objective = std::numeric_limits<double>::infinity();
};

inline MomentumState start_momentum(const CoordinatorState& state) {
  MomentumState m;
  m.z_hat = state.z;
  m.lambda_hat = state.lambda;
  return m;
}

inline bool restart_check(double c_k, double c_prev, double eta) { return c_k > eta * c_prev; }

inline double next_momentum_alpha(double alpha) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * alpha * alpha)); }

inline bool acceleration_supported(std::span<const AgentSpec> agents) {
  bool has_primal = false;
  bool has_other = false;
  for (const auto& a : agents) (a.kind() == AgentKind::Primal ? has_primal : has_other) = true;
  return !(has_primal && has_other);
}

inline void require_accelerable(std::span<const AgentSpec> agents) {
  if (!acceleration_supported(agents)) {
    fail(Errc::UnsupportedMix, "acceleration does not support primal agents mixed with other kinds");
  }
}

inline double combined_residual(const CoordinatorState& next, const MomentumState& momentum,
                                std::span<const AgentSpec> agents) {
  double rho = 0.0;
  for (const auto& a : agents) rho += a.rho();
  rho /= static_cast<double>(agents.size());
  double price_sq = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    price_sq += (next.lambda[i] - momentum.lambda_hat[i]).squaredNorm();
  }
  return price_sq / rho + rho * (next.z - momentum.z_hat).squaredNorm();
}

inline double consensus_objective(std::span<const AgentSpec> agents, const Vector& z) {
  double f = 0.0;
  for (const auto& a : agents) f += objective_value(a, z);
  return f;
}

struct AcceleratedRound {
  CoordinatorState state;
  MomentumState momentum;
};

inline AcceleratedRound accelerated_iterate(const CoordinatorState& state, const MomentumState& momentum,
                                            std::span<const AgentSpec> agents, const SolveConfig& config = {}) {
  require_accelerable(agents);
  require_consistent(state, agents);
  require_same_size(state.dim(), momentum.z_hat.size(), "momentum z_hat");
  if (momentum.lambda_hat.size() != agents.size()) fail(Errc::DimensionMismatch, "momentum lambda_hat");

  CoordinatorState from = state;
  from.z = momentum.z_hat;
  from.lambda = momentum.lambda_hat;
  CoordinatorState next = iterate(from, agents, config);

  const auto& opts = config.accel;
  MomentumState out = momentum;
  const double c = combined_residual(next, momentum, agents);
  bool restart = restart_check(c, momentum.c, opts.eta);
  if (opts.objective_restart) {
    const double f = consensus_objective(agents, next.z);
    restart = restart || f > momentum.objective;
    out.objective = f;
  }

  if (restart) {
    out.alpha = 1.0;
    out.z_hat = next.z;
    out.lambda_hat = next.lambda;
    out.c = momentum.c / opts.eta;
    ++out.restarts;
    out.restarted = true;
  } else {
    const double alpha_next = next_momentum_alpha(momentum.alpha);
    const double weight = opts.zero_momentum ? 0.0 : (momentum.alpha - 1.0) / alpha_next;
    out.alpha = alpha_next;
    out.z_hat = next.z + weight * (next.z - state.z);
    for (std::size_t i = 0; i < agents.size(); ++i) {
      out.lambda_hat[i] = next.lambda[i] + weight * (next.lambda[i] - state.lambda[i]);
    }
    out.c = c;
    out.restarted = false;
  }
  return {std::move(next), std::move(out)};
}

}  // namespace tacp

#endif  // TACP_ACCELERATION_HPP
