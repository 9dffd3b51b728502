#ifndef TACP_TESTS_SUPPORT_HPP
#define TACP_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "tacp/tacp.hpp"

namespace tacp::testing {

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline Vector scalar(double v) { return Vector::Constant(1, v); }

inline SymmetricMatrix diag(std::initializer_list<double> d) { return SymmetricMatrix::diagonal(vec(d)); }

inline QuadraticObjective quad1(double q, double b) { return QuadraticObjective::scalar(q, b); }

/// Random SPD matrix with eigenvalues in [lo, hi].
inline SymmetricMatrix random_spd(std::mt19937_64& rng, Eigen::Index n, double lo = 0.5, double hi = 5.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = u(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix q = qr.householderQ();
  std::uniform_real_distribution<double> ev(lo, hi);
  Vector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = ev(rng);
  return SymmetricMatrix::symmetrized(q * d.asDiagonal() * q.transpose());
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Largest coordinate change between two states.
inline double state_distance(const CoordinatorState& a, const CoordinatorState& b) {
  double d = max_abs_diff(a.z, b.z);
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    d = std::max(d, max_abs_diff(a.x[i], b.x[i]));
    d = std::max(d, max_abs_diff(a.lambda[i], b.lambda[i]));
  }
  return d;
}

inline double state_scale(const CoordinatorState& s) {
  double m = s.z.cwiseAbs().maxCoeff();
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    m = std::max(m, s.x[i].cwiseAbs().maxCoeff());
    m = std::max(m, s.lambda[i].cwiseAbs().maxCoeff());
  }
  return m;
}

/// The hand-traced pair: g1 = x^2/2 + x, g2 = x^2/2 - 3x, both dual with rho = 1.
inline std::vector<AgentSpec> two_dual_agents() {
  return {make_dual_agent(quad1(1.0, 1.0), 1.0), make_dual_agent(quad1(1.0, -3.0), 1.0)};
}

}  // namespace tacp::testing

#endif  // TACP_TESTS_SUPPORT_HPP
