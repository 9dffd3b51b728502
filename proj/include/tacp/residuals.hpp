#ifndef TACP_RESIDUALS_HPP
#define TACP_RESIDUALS_HPP

#include <cmath>
#include <span>

#include "tacp/agents.hpp"
#include "tacp/coordinator.hpp"

namespace tacp {

struct ResidualNorms {
  double primal;  // sqrt(sum_i ||z - x_i||^2)
  double dual;    // sqrt(sum_i rho_i^2) ||z - z_prev||
};

inline ResidualNorms residual_norms(const CoordinatorState& state, const Vector& z_prev,
                                    std::span<const AgentSpec> agents) {
  require_consistent(state, agents);
  require_same_size(state.dim(), z_prev.size(), "residual_norms previous plan");
  double primal_sq = 0.0;
  double rho_sq = 0.0;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    primal_sq += (state.z - state.x[i]).squaredNorm();
    rho_sq += agents[i].rho() * agents[i].rho();
  }
  return {std::sqrt(primal_sq), std::sqrt(rho_sq) * (state.z - z_prev).norm()};
}

/// Scales the stopping thresholds are measured against: ||A z|| for the
/// primal residual and the stacked price norm for the dual residual.
struct ResidualScales {
  double primal;
  double dual;
};

inline ResidualScales residual_scales(const CoordinatorState& state) {
  double lambda_sq = 0.0;
  for (const auto& l : state.lambda) lambda_sq += l.squaredNorm();
  return {std::sqrt(static_cast<double>(state.agent_count())) * state.z.norm(), std::sqrt(lambda_sq)};
}

}  // namespace tacp

#endif  // TACP_RESIDUALS_HPP
