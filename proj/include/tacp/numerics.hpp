#ifndef TACP_NUMERICS_HPP
#define TACP_NUMERICS_HPP

// Dense linear-algebra substrate shared by every module: SPD solves,
// extremal eigenvalues and quadratic Bregman divergences. Problem sizes are
// desk-scale, so everything is dense and exact (no iterative eigen solvers).

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <utility>

#include "tacp/errors.hpp"

namespace tacp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Scale-aware tolerance a * (1 + scale), used wherever a norm is compared to a threshold.
inline double mixed_tolerance(double a, double scale) { return a * (1.0 + scale); }

inline bool all_finite(const Vector& v) { return v.allFinite(); }

inline void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) fail(Errc::NonFinite, std::string(what) + " has a non-finite entry");
}

inline void require_same_size(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    fail(Errc::DimensionMismatch,
         std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

/// Square matrix that is symmetric entry-for-entry as stored.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  explicit SymmetricMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
      fail(Errc::DimensionMismatch, "symmetric matrix must be square, got " +
                                        std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
    }
    if (!m_.allFinite()) fail(Errc::NonFinite, "symmetric matrix has a non-finite entry");
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      for (Eigen::Index i = j + 1; i < m_.rows(); ++i) {
        if (m_(i, j) != m_(j, i)) fail(Errc::NotSymmetric, "entry (i,j) differs from (j,i)");
      }
    }
  }

  /// Symmetrizes (M + M^T)/2 first; for products like A^T A that are symmetric
  /// only up to rounding.
  static SymmetricMatrix symmetrized(const Matrix& m) {
    if (m.rows() != m.cols()) fail(Errc::DimensionMismatch, "symmetrized: matrix must be square");
    return SymmetricMatrix(Matrix(0.5 * (m + m.transpose())));
  }

  static SymmetricMatrix identity(Eigen::Index n) { return scaled_identity(n, 1.0); }
  static SymmetricMatrix scaled_identity(Eigen::Index n, double s) {
    return SymmetricMatrix(Matrix(s * Matrix::Identity(n, n)));
  }
  static SymmetricMatrix diagonal(const Vector& d) { return SymmetricMatrix(Matrix(d.asDiagonal())); }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  Vector operator*(const Vector& v) const {
    require_same_size(dim(), v.size(), "matrix-vector product");
    return m_ * v;
  }

  SymmetricMatrix shifted(double s) const {
    Matrix out = m_;
    out.diagonal().array() += s;
    return SymmetricMatrix(std::move(out));
  }

  friend SymmetricMatrix operator+(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    require_same_size(a.dim(), b.dim(), "matrix sum");
    return SymmetricMatrix(Matrix(a.m_ + b.m_));
  }
  friend SymmetricMatrix operator-(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    require_same_size(a.dim(), b.dim(), "matrix difference");
    return SymmetricMatrix(Matrix(a.m_ - b.m_));
  }
  friend SymmetricMatrix operator*(double s, const SymmetricMatrix& a) {
    return SymmetricMatrix(Matrix(s * a.m_));
  }

 private:
  Matrix m_;
};

/// Immutable Cholesky factorization M = L L^T. Cheap to share across iterations.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(const SymmetricMatrix& m) : n_(m.dim()), llt_(m.matrix()) {
    if (llt_.info() != Eigen::Success) {
      fail(Errc::NotPositiveDefinite, "Cholesky pivot is not positive");
    }
  }

  Eigen::Index dim() const { return n_; }

  Vector solve(const Vector& v) const {
    require_same_size(n_, v.size(), "spd_solve");
    require_finite(v, "spd_solve right-hand side");
    return llt_.solve(v);
  }

  /// v^T M^{-1} v evaluated as ||L^{-1} v||^2, so the result is never negative.
  double inverse_quadratic_form(const Vector& v) const {
    require_same_size(n_, v.size(), "inverse quadratic form");
    const Vector w = llt_.matrixL().solve(v);
    return w.squaredNorm();
  }

 private:
  Eigen::Index n_;
  Eigen::LLT<Matrix> llt_;
};

/// Solves M x = v for symmetric positive definite M.
inline Vector spd_solve(const SymmetricMatrix& m, const Vector& v) {
  require_same_size(m.dim(), v.size(), "spd_solve");
  return CholeskyFactor(m).solve(v);
}

struct EigenvalueBounds {
  double mu;    // smallest eigenvalue
  double beta;  // largest eigenvalue
};

inline EigenvalueBounds extreme_eigenvalue_bounds(const SymmetricMatrix& m) {
  if (m.dim() == 0) fail(Errc::DimensionMismatch, "eigenvalue bounds of an empty matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(Errc::NoConvergence, "symmetric eigensolver failed");
  const Vector& ev = solver.eigenvalues();  // ascending
  return {ev(0), ev(ev.size() - 1)};
}

inline EigenvalueBounds extreme_eigenvalue_bounds(const Matrix& m) {
  if (m.rows() != m.cols()) fail(Errc::DimensionMismatch, "eigenvalue bounds need a square matrix");
  return extreme_eigenvalue_bounds(SymmetricMatrix(m));
}

/// 1/2 (u - v)^T H (u - v): the Bregman divergence of phi(x) = 1/2 x^T H x.
inline double bregman_quadratic(const SymmetricMatrix& h, const Vector& u, const Vector& v) {
  require_same_size(h.dim(), u.size(), "bregman_quadratic");
  require_same_size(u.size(), v.size(), "bregman_quadratic");
  const Vector d = u - v;
  return 0.5 * d.dot(h.matrix() * d);
}

/// Same divergence for the spherical metric H = s I.
inline double bregman_spherical(double s, const Vector& u, const Vector& v) {
  require_same_size(u.size(), v.size(), "bregman_spherical");
  return 0.5 * s * (u - v).squaredNorm();
}

}  // namespace tacp

#endif  // TACP_NUMERICS_HPP
