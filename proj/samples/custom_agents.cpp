// Three agents agreeing on a plan in R^4: one only returns gradients of a
// softplus-plus-quadratic cost, one solves its own prox for a cost of the same
// shape, and one is an ordinary quadratic answering prices.

#include <cmath>
#include <cstdio>
#include <vector>

#include "tacp/tacp.hpp"

using tacp::Matrix;
using tacp::Vector;

namespace {

// g(x) = sum_j log(1 + exp(x_j)) + w/2 ||x - c||^2 : mu = w, beta = w + 1/4.
struct SoftplusCost {
  Vector c;
  double w;

  double value(const Vector& x) const {
    double v = 0.5 * w * (x - c).squaredNorm();
    for (double e : x) v += std::log1p(std::exp(-std::abs(e))) + std::max(e, 0.0);
    return v;
  }
  Vector gradient(const Vector& x) const {
    Vector g = w * (x - c);
    for (Eigen::Index j = 0; j < x.size(); ++j) g(j) += 1.0 / (1.0 + std::exp(-x(j)));
    return g;
  }
  Matrix hessian(const Vector& x) const {
    Vector d(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double s = 1.0 / (1.0 + std::exp(-x(j)));
      d(j) = w + s * (1.0 - s);
    }
    return d.asDiagonal();
  }
  // argmin g(x) - lambda^T x + rho/2 ||z - x||^2, one Newton solve per coordinate.
  Vector prox(const Vector& lambda, const Vector& z, double rho) const {
    Vector x = z;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      for (int it = 0; it < 50; ++it) {
        const double s = 1.0 / (1.0 + std::exp(-x(j)));
        const double f = s + w * (x(j) - c(j)) - lambda(j) - rho * (z(j) - x(j));
        const double step = f / (s * (1.0 - s) + w + rho);
        x(j) -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(x(j)))) break;
      }
    }
    return x;
  }

  tacp::OracleBundle bundle() const {
    tacp::OracleBundle b;
    b.dimension = c.size();
    b.value = [*this](const Vector& x) { return value(x); };
    b.gradient = [*this](const Vector& x) { return gradient(x); };
    b.hessian = [*this](const Vector& x) { return hessian(x); };
    b.prox = [*this](const Vector& l, const Vector& z, double rho) { return prox(l, z, rho); };
    b.mu = w;
    b.beta = w + 0.25;
    return b;
  }
};

}  // namespace

int main() {
  const SoftplusCost left{Vector::LinSpaced(4, -2.0, 1.0), 0.5};
  const SoftplusCost right{Vector::LinSpaced(4, 3.0, 0.0), 2.0};
  const tacp::QuadraticObjective bowl(tacp::SymmetricMatrix::diagonal(Vector::Constant(4, 1.5)),
                                      Vector::LinSpaced(4, 1.0, -1.0));

  const std::vector<tacp::AgentSpec> agents{
      tacp::make_primal_agent(left.bundle(), 0.7),
      tacp::make_proximal_agent(right.bundle(), 1.0),
      tacp::make_dual_agent(bowl, 1.5),
  };

  tacp::SolveConfig config;
  config.primal_tol = config.dual_tol = 1e-10;
  const auto result = tacp::solve(agents, config);

  // At the consensus optimum the three gradients cancel.
  const Vector stationarity = left.gradient(result.state.z) + right.gradient(result.state.z) + bowl.gradient(result.state.z);
  std::printf("converged: %s after %zu rounds\n", result.converged ? "yes" : "no", result.iterations);
  std::printf("plan:");
  for (double v : result.state.z) std::printf(" %.6f", v);
  std::printf("\nsum of gradients at plan: %.2e\n", stationarity.norm());
  return result.converged ? 0 : 1;
}
