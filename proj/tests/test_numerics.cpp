#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "expect_error.hpp"
#include "support.hpp"

using namespace tacp;
using namespace tacp::testing;

TEST(SpdSolve, IdentityReturnsRhs) {
  EXPECT_EQ(spd_solve(SymmetricMatrix::identity(2), vec({3, -1})), vec({3, -1}));
}

TEST(SpdSolve, DiagonalScaling) {
  EXPECT_LT(max_abs_diff(spd_solve(diag({2, 4}), vec({2, 4})), vec({1, 1})), 1e-15);
}

TEST(SpdSolve, CoupledTwoByTwo) {
  const SymmetricMatrix m(Matrix{{2, 1}, {1, 2}});
  const Vector x = spd_solve(m, vec({3, 3}));
  EXPECT_NEAR(x(0), 1.0, 1e-15);
  EXPECT_NEAR(x(1), 1.0, 1e-15);
}

TEST(SpdSolve, RejectsIndefiniteAndMismatchedInput) {
  const SymmetricMatrix indefinite(Matrix{{1, 2}, {2, 1}});
  EXPECT_ERRC(spd_solve(indefinite, vec({1, 1})), Errc::NotPositiveDefinite);
  EXPECT_ERRC(spd_solve(SymmetricMatrix::identity(2), vec({1, 1, 1})), Errc::DimensionMismatch);
}

TEST(SpdSolve, ResidualSmallOnRandomSystems) {
  std::mt19937_64 rng(7);
  for (Eigen::Index n : {1, 2, 5, 20, 50, 100}) {
    const auto m = random_spd(rng, n, 0.1, 50.0);
    const Vector v = random_vector(rng, n, 1e4);
    const Vector x = spd_solve(m, v);
    EXPECT_LE((m * x - v).norm(), 1e-10 * (1.0 + v.norm())) << "n = " << n;
  }
}

TEST(SymmetricMatrixType, RejectsAsymmetricNonSquareAndNonFinite) {
  EXPECT_ERRC(SymmetricMatrix(Matrix{{1, 2}, {3, 1}}), Errc::NotSymmetric);
  EXPECT_ERRC(SymmetricMatrix(Matrix(2, 3)), Errc::DimensionMismatch);
  EXPECT_ERRC(SymmetricMatrix(Matrix{{std::nan(""), 0}, {0, 1}}), Errc::NonFinite);
}

TEST(EigenvalueBounds, Examples) {
  const auto id = extreme_eigenvalue_bounds(SymmetricMatrix::identity(3));
  EXPECT_NEAR(id.mu, 1.0, 1e-12);
  EXPECT_NEAR(id.beta, 1.0, 1e-12);
  const auto d = extreme_eigenvalue_bounds(diag({1, 4}));
  EXPECT_NEAR(d.mu, 1.0, 1e-10);
  EXPECT_NEAR(d.beta, 4.0, 1e-10);
  const auto c = extreme_eigenvalue_bounds(SymmetricMatrix(Matrix{{2, 1}, {1, 2}}));
  EXPECT_NEAR(c.mu, 1.0, 1e-10);
  EXPECT_NEAR(c.beta, 3.0, 1e-10);
}

TEST(EigenvalueBounds, NonSquareRejected) {
  EXPECT_ERRC(extreme_eigenvalue_bounds(Matrix(2, 3)), Errc::DimensionMismatch);
}

TEST(EigenvalueBounds, BracketRayleighQuotients) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix a(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i)
      for (Eigen::Index j = 0; j < 8; ++j) a(i, j) = u(rng);
    const auto m = SymmetricMatrix::symmetrized(a);
    const auto [mu, beta] = extreme_eigenvalue_bounds(m);
    EXPECT_LE(mu, beta);
    for (int k = 0; k < 100; ++k) {
      const Vector w = random_vector(rng, 8);
      const double rq = w.dot(m * w);
      const double scale = std::max(std::abs(mu), std::abs(beta)) * w.squaredNorm();
      EXPECT_GE(rq, mu * w.squaredNorm() - 1e-8 * scale);
      EXPECT_LE(rq, beta * w.squaredNorm() + 1e-8 * scale);
    }
  }
}

TEST(BregmanQuadratic, Examples) {
  std::mt19937_64 rng(3);
  const auto h = random_spd(rng, 3);
  const Vector u = random_vector(rng, 3);
  EXPECT_EQ(bregman_quadratic(h, u, u), 0.0);
  EXPECT_DOUBLE_EQ(bregman_quadratic(SymmetricMatrix::identity(2), vec({1, 0}), vec({0, 0})), 0.5);
  EXPECT_DOUBLE_EQ(bregman_quadratic(diag({2}), scalar(3), scalar(1)), 4.0);
}

TEST(BregmanQuadratic, SwapSymmetricAndDimensionChecked) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto h = random_spd(rng, 4);
    const Vector u = random_vector(rng, 4), v = random_vector(rng, 4);
    EXPECT_NEAR(bregman_quadratic(h, u, v), bregman_quadratic(h, v, u), 1e-14);
    EXPECT_GE(bregman_quadratic(h, u, v), 0.0);
  }
  EXPECT_ERRC(bregman_quadratic(SymmetricMatrix::identity(2), vec({1}), vec({1})), Errc::DimensionMismatch);
}

TEST(BregmanSpherical, MatchesScaledIdentity) {
  const Vector u = vec({1, -2, 3}), v = vec({0.5, 1, -1});
  EXPECT_NEAR(bregman_spherical(2.5, u, v), bregman_quadratic(SymmetricMatrix::scaled_identity(3, 2.5), u, v),
              1e-13);
}

TEST(CholeskyFactorType, InverseQuadraticFormMatchesSolve) {
  std::mt19937_64 rng(9);
  const auto m = random_spd(rng, 6);
  const CholeskyFactor f(m);
  const Vector v = random_vector(rng, 6);
  EXPECT_NEAR(f.inverse_quadratic_form(v), v.dot(f.solve(v)), 1e-12 * (1 + v.squaredNorm()));
}

TEST(Tolerances, MixedForm) {
  EXPECT_DOUBLE_EQ(mixed_tolerance(1e-10, 0.0), 1e-10);
  EXPECT_DOUBLE_EQ(mixed_tolerance(1e-10, 1e4), 1e-10 * 10001.0);
}
