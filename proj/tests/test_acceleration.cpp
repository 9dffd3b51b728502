#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "expect_error.hpp"
#include "support.hpp"
#include "tacp/harness/problem.hpp"
#include "tacp/reference.hpp"

using namespace tacp;
using namespace tacp::testing;

namespace {

std::vector<AgentSpec> small_problem(harness::Mix mix, double rho = 1.0) {
  harness::ProblemConfig pc;
  pc.agents = 6;
  pc.n = 5;
  pc.seed = 7;
  return harness::generate_problem(pc, mix, {"", rho, rho, rho});
}

}  // namespace

TEST(Momentum, AlphaRecurrence) {
  EXPECT_NEAR(next_momentum_alpha(1.0), 1.618034, 1e-6);
  EXPECT_NEAR(next_momentum_alpha(next_momentum_alpha(1.0)), 2.193527, 1e-6);
  // The first extrapolation weight (alpha_0 - 1) / alpha_1 is zero.
  EXPECT_EQ((1.0 - 1.0) / next_momentum_alpha(1.0), 0.0);
}

TEST(Momentum, RestartCheck) {
  EXPECT_TRUE(restart_check(1.0, 0.5, 0.999));
  EXPECT_FALSE(restart_check(0.4, 0.5, 0.999));
  EXPECT_TRUE(restart_check(0.5, 0.5, 0.999));
  EXPECT_FALSE(restart_check(1e300, std::numeric_limits<double>::infinity(), 0.999));
}

TEST(Momentum, PrimalMixedWithOthersIsRejected) {
  const auto agents = small_problem(harness::Mix::PrimalDual);
  EXPECT_FALSE(acceleration_supported(agents));
  SolveConfig cfg;
  cfg.acceleration = true;
  EXPECT_ERRC(solve(agents, cfg), Errc::UnsupportedMix);
  const auto state = initialize(agents);
  EXPECT_ERRC(accelerated_iterate(state, start_momentum(state), agents), Errc::UnsupportedMix);

  EXPECT_TRUE(acceleration_supported(small_problem(harness::Mix::AllPrimal)));
  EXPECT_TRUE(acceleration_supported(small_problem(harness::Mix::DualProximal)));
}

TEST(Momentum, ZeroMomentumMatchesVanilla) {
  for (auto mix : {harness::Mix::AllDual, harness::Mix::AllProximal, harness::Mix::DualProximal}) {
    const auto agents = small_problem(mix);
    SolveConfig vanilla;
    vanilla.max_iters = 200;
    SolveConfig zero = vanilla;
    zero.acceleration = true;
    zero.accel.zero_momentum = true;
    const auto a = solve(agents, vanilla);
    const auto b = solve(agents, zero);
    ASSERT_EQ(a.iterations, b.iterations) << harness::mix_name(mix);
    EXPECT_EQ(state_distance(a.state, b.state), 0.0) << harness::mix_name(mix);
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
      EXPECT_EQ(a.trace[k].primal_residual, b.trace[k].primal_residual);
      EXPECT_EQ(a.trace[k].dual_residual, b.trace[k].dual_residual);
    }
  }
}

TEST(Momentum, RestartResetsAlpha) {
  const auto agents = small_problem(harness::Mix::AllProximal);
  auto state = initialize(agents);
  auto momentum = start_momentum(state);
  momentum.alpha = 5.0;
  momentum.c = 0.0;  // any positive residual now exceeds eta * c
  const auto round = accelerated_iterate(state, momentum, agents);
  EXPECT_TRUE(round.momentum.restarted);
  EXPECT_EQ(round.momentum.alpha, 1.0);
  EXPECT_EQ(round.momentum.restarts, 1u);
  EXPECT_EQ(state_distance(round.state, [&] {
              CoordinatorState s = round.state;
              s.z = round.momentum.z_hat;
              s.lambda = round.momentum.lambda_hat;
              return s;
            }()),
            0.0);
}

TEST(Momentum, StationaryStateNeverRestarts) {
  // The two-dual saddle point is exact in floating point, so every round reproduces it bit for bit.
  const auto agents = two_dual_agents();
  auto state = direct_solve(agents).as_state();
  auto momentum = start_momentum(state);
  for (int k = 0; k < 10; ++k) {
    auto round = accelerated_iterate(state, momentum, agents);
    EXPECT_FALSE(round.momentum.restarted);
    EXPECT_EQ(round.momentum.c, 0.0);
    EXPECT_EQ(state_distance(state, round.state), 0.0);
    state = std::move(round.state);
    momentum = std::move(round.momentum);
  }
}

TEST(Momentum, AcceleratedProximalNoSlowerThanVanilla) {
  harness::ProblemConfig pc;
  pc.agents = 10;
  pc.n = 10;
  const auto agents = harness::generate_problem(pc, harness::Mix::AllProximal, {"", 1, 1, 1});
  const auto saddle = direct_solve(agents);
  auto first_hit = [&](bool accelerate) {
    SolveConfig cfg;
    cfg.acceleration = accelerate;
    std::size_t hit = 0;
    solve(agents, cfg, [&](const CoordinatorState&, const CoordinatorState& next, const IterationRecord&) {
      if (hit == 0 && relative_error(next.z, agents, saddle) <= 1e-6) hit = next.k;
    });
    return hit;
  };
  const auto vanilla = first_hit(false);
  const auto fast = first_hit(true);
  ASSERT_GT(vanilla, 0u);
  ASSERT_GT(fast, 0u);
  EXPECT_LE(fast, vanilla);
}
