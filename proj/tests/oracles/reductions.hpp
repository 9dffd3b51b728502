#ifndef TACP_TESTS_ORACLES_REDUCTIONS_HPP
#define TACP_TESTS_ORACLES_REDUCTIONS_HPP

// Textbook loops written against raw Eigen types, with solvers (LDLT, LU)
// different from the library's Cholesky path.

#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Problem {
  std::vector<MatrixXd> Q;
  std::vector<VectorXd> b;
  std::size_t agents() const { return Q.size(); }
  Eigen::Index dim() const { return b.front().size(); }
};

struct Iterate {
  std::vector<VectorXd> x;
  VectorXd z;
  std::vector<VectorXd> lambda;
};

/// Dual ascent for min sum g_i(x_i) s.t. x_i = z: each agent minimizes its
/// Lagrangian term, the plan is the rho-weighted mean, prices climb the
/// constraint violation. Returns iterates 1..iters.
inline std::vector<Iterate> dual_ascent(const Problem& p, const std::vector<double>& rho, int iters) {
  const auto m = p.agents();
  std::vector<Eigen::LDLT<MatrixXd>> solvers;
  for (const auto& q : p.Q) solvers.emplace_back(q);
  std::vector<VectorXd> lambda(m, VectorXd::Zero(p.dim()));
  std::vector<Iterate> out;
  for (int k = 0; k < iters; ++k) {
    Iterate it;
    double rho_sum = 0;
    VectorXd acc = VectorXd::Zero(p.dim());
    for (std::size_t i = 0; i < m; ++i) {
      it.x.push_back(solvers[i].solve(lambda[i] - p.b[i]));
      acc += rho[i] * it.x[i];
      rho_sum += rho[i];
    }
    it.z = acc / rho_sum;
    for (std::size_t i = 0; i < m; ++i) lambda[i] += rho[i] * (it.z - it.x[i]);
    it.lambda = lambda;
    out.push_back(std::move(it));
  }
  return out;
}

/// Scaled-form consensus ADMM with a common penalty:
///   x_i = argmin g_i(x) + rho/2 ||x - z + u_i||^2,  z = mean(x_i + u_i),  u_i += x_i - z.
/// Reported prices are lambda_i = -rho u_i.
inline std::vector<Iterate> consensus_admm(const Problem& p, double rho, int iters) {
  const auto m = p.agents();
  const auto n = p.dim();
  std::vector<Eigen::PartialPivLU<MatrixXd>> solvers;
  for (const auto& q : p.Q) solvers.emplace_back(q + rho * MatrixXd::Identity(n, n));
  std::vector<VectorXd> u(m, VectorXd::Zero(n));
  VectorXd z = VectorXd::Zero(n);
  std::vector<Iterate> out;
  for (int k = 0; k < iters; ++k) {
    Iterate it;
    for (std::size_t i = 0; i < m; ++i) it.x.push_back(solvers[i].solve(rho * (z - u[i]) - p.b[i]));
    z.setZero();
    for (std::size_t i = 0; i < m; ++i) z += it.x[i] + u[i];
    z /= static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
      u[i] += it.x[i] - z;
      it.lambda.push_back(-rho * u[i]);
    }
    it.z = z;
    out.push_back(std::move(it));
  }
  return out;
}

inline VectorXd stack(const std::vector<VectorXd>& parts) {
  const auto n = parts.front().size();
  VectorXd out(n * static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) out.segment(static_cast<Eigen::Index>(i) * n, n) = parts[i];
  return out;
}

/// x^{k+1} = W x^k - (grad g(x^k) - lambda^k) / (L + rho) on stacked plans, with
/// W = (L I + rho/M 1 1^T) / (L + rho) acting blockwise.
inline VectorXd mixing_step(const Problem& p, double L, double rho, const VectorXd& x, const VectorXd& lambda) {
  const auto m = static_cast<Eigen::Index>(p.agents());
  const auto n = p.dim();
  MatrixXd w = MatrixXd::Constant(m, m, rho / static_cast<double>(m));
  w.diagonal().array() += L;
  w /= (L + rho);
  MatrixXd big = MatrixXd::Zero(m * n, m * n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) big.block(i * n, j * n, n, n) = w(i, j) * MatrixXd::Identity(n, n);
  VectorXd grad(m * n);
  for (Eigen::Index i = 0; i < m; ++i) {
    grad.segment(i * n, n) = p.Q[static_cast<std::size_t>(i)] * x.segment(i * n, n) + p.b[static_cast<std::size_t>(i)];
  }
  return big * x - (grad - lambda) / (L + rho);
}

}  // namespace oracle

#endif  // TACP_TESTS_ORACLES_REDUCTIONS_HPP
