#ifndef TACP_SOLVE_HPP
#define TACP_SOLVE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tacp/acceleration.hpp"
#include "tacp/coordinator.hpp"
#include "tacp/residuals.hpp"

namespace tacp {

struct IterationRecord {
  std::size_t k = 0;  // index of the state this record describes (after the round)
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool restarted = false;
};

struct RunResult {
  CoordinatorState state;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
  std::vector<IterationRecord> trace;
};

/// Called once per round with the states before and after it.
using IterationObserver =
    std::function<void(const CoordinatorState& prev, const CoordinatorState& next, const IterationRecord&)>;

/// Stopping rule: primal <= primal_tol (1 + ||A z||) and dual <= dual_tol (1 + ||lambda||).
inline bool residuals_converged(const ResidualNorms& r, const CoordinatorState& state, const SolveConfig& config) {
  if (!std::isfinite(r.primal) || !std::isfinite(r.dual)) return false;
  const auto scale = residual_scales(state);
  return r.primal <= mixed_tolerance(config.primal_tol, scale.primal) &&
         r.dual <= mixed_tolerance(config.dual_tol, scale.dual);
}

inline RunResult solve(std::span<const AgentSpec> agents, const SolveConfig& config, CoordinatorState initial,
                       const IterationObserver& observer = {}) {
  config.validate();
  require_consistent(initial, agents);
  if (config.acceleration) require_accelerable(agents);

  RunResult result;
  result.trace.reserve(std::min<std::size_t>(config.max_iters, 1u << 16));
  CoordinatorState state = std::move(initial);
  MomentumState momentum = start_momentum(state);

  for (std::size_t it = 0; it < config.max_iters; ++it) {
    CoordinatorState next;
    bool restarted = false;
    if (config.acceleration) {
      auto round = accelerated_iterate(state, momentum, agents, config);
      next = std::move(round.state);
      momentum = std::move(round.momentum);
      restarted = momentum.restarted;
    } else {
      next = iterate(state, agents, config);
    }
    if (!state_is_finite(next)) {
      fail(Errc::NonFinite, "iterate " + std::to_string(next.k) + " is not finite; hyperparameters diverge");
    }

    const auto res = residual_norms(next, state.z, agents);
    if (!std::isfinite(res.primal) || !std::isfinite(res.dual)) {
      fail(Errc::NonFinite, "residuals overflow at iterate " + std::to_string(next.k) + "; hyperparameters diverge");
    }
    IterationRecord record{next.k, res.primal, res.dual, restarted};
    result.trace.push_back(record);
    if (observer) observer(state, next, record);

    state = std::move(next);
    result.iterations = it + 1;
    if (residuals_converged(res, state, config)) {
      result.converged = true;
      break;
    }
  }
  result.restarts = momentum.restarts;
  result.state = std::move(state);
  return result;
}

inline RunResult solve(std::span<const AgentSpec> agents, const SolveConfig& config,
                       const IterationObserver& observer = {}) {
  config.validate();
  return solve(agents, config, initialize(agents), observer);
}

}  // namespace tacp

#endif  // TACP_SOLVE_HPP
