#ifndef TACP_AGENTS_HPP
#define TACP_AGENTS_HPP

// Agents and the three oracle interfaces the coordinator talks to:
//   primal   - returns the gradient at a proposed plan,
//   dual     - consumes a price, returns argmin g(x) - lambda^T x,
//   proximal - consumes (price, plan, rho), returns the augmented-Lagrangian minimizer.
// The coordinator only ever reaches an agent's objective through these calls.

#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "tacp/errors.hpp"
#include "tacp/numerics.hpp"

namespace tacp {

enum class AgentKind { Primal, Dual, Proximal };

constexpr std::string_view kind_name(AgentKind kind) noexcept {
  switch (kind) {
    case AgentKind::Primal: return "primal";
    case AgentKind::Dual: return "dual";
    case AgentKind::Proximal: return "proximal";
  }
  return "unknown";
}

/// g(x) = 1/2 x^T Q x + b^T x with Q positive definite.
///
/// The curvature bounds mu, beta are the extreme eigenvalues of Q. The
/// factorization of Q is built eagerly; the factorization of Q + rho I is
/// built on first use and kept until a different rho is requested. Copies
/// share both caches (Q and b never change after construction).
class QuadraticObjective {
 public:
  QuadraticObjective(SymmetricMatrix q, Vector b) : q_(std::move(q)), b_(std::move(b)) {
    require_same_size(q_.dim(), b_.size(), "quadratic objective Q vs b");
    require_finite(b_, "linear term b");
    const auto bounds = extreme_eigenvalue_bounds(q_);
    if (!(bounds.mu > 0.0)) {
      fail(Errc::NotPositiveDefinite,
           "quadratic objective needs Q positive definite (mu = " + std::to_string(bounds.mu) + ")");
    }
    mu_ = bounds.mu;
    beta_ = bounds.beta;
    q_factor_ = std::make_shared<const CholeskyFactor>(q_);
    shift_cache_ = std::make_shared<ShiftCache>();
  }

  /// Scalar objective q/2 x^2 + b x, handy for hand-checked examples.
  static QuadraticObjective scalar(double q, double b) {
    return QuadraticObjective(SymmetricMatrix::scaled_identity(1, q), Vector::Constant(1, b));
  }

  Eigen::Index dim() const { return b_.size(); }
  const SymmetricMatrix& q() const { return q_; }
  const Vector& b() const { return b_; }
  double mu() const { return mu_; }
  double beta() const { return beta_; }

  double value(const Vector& x) const {
    require_same_size(dim(), x.size(), "objective value");
    return 0.5 * x.dot(q_.matrix() * x) + b_.dot(x);
  }

  Vector gradient(const Vector& x) const {
    require_same_size(dim(), x.size(), "objective gradient");
    return q_.matrix() * x + b_;
  }

  const CholeskyFactor& factor() const { return *q_factor_; }

  /// Factorization of Q + rho I.
  std::shared_ptr<const CholeskyFactor> shifted_factor(double rho) const {
    std::lock_guard<std::mutex> lock(shift_cache_->mutex);
    if (!shift_cache_->factor || shift_cache_->rho != rho) {
      shift_cache_->factor = std::make_shared<const CholeskyFactor>(q_.shifted(rho));
      shift_cache_->rho = rho;
    }
    return shift_cache_->factor;
  }

 private:
  struct ShiftCache {
    std::mutex mutex;
    double rho = 0.0;
    std::shared_ptr<const CholeskyFactor> factor;
  };

  SymmetricMatrix q_;
  Vector b_;
  double mu_ = 0.0;
  double beta_ = 0.0;
  std::shared_ptr<const CholeskyFactor> q_factor_;
  std::shared_ptr<ShiftCache> shift_cache_;
};

/// Callback bundle for agents whose objective is not a known quadratic.
///
/// Only the callback matching the agent's kind is required: `gradient` for
/// primal agents, `conjugate_argmin` (argmin g(x) - lambda^T x) for dual
/// agents, `prox` (argmin g(x) - lambda^T x + rho/2 ||z - x||^2) for proximal
/// agents. `hessian` is needed only by the second-order dual update. Every
/// callback must be deterministic for fixed inputs and safe to call from
/// several threads at once.
///
/// Curvature bounds are not derived for bundles: supply mu (0 if g is not
/// strongly convex) and beta (infinity if the gradient is not Lipschitz).
struct OracleBundle {
  Eigen::Index dimension = 0;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Vector(const Vector&)> conjugate_argmin;
  std::function<Vector(const Vector& lambda, const Vector& z, double rho)> prox;
  std::function<Matrix(const Vector&)> hessian;
  double mu = 0.0;
  double beta = std::numeric_limits<double>::infinity();
};

using Objective = std::variant<QuadraticObjective, OracleBundle>;

/// Optional per-agent settings. Which ones apply depends on the kind:
/// `L` and `H` are primal-only, the two dual variants are dual-only.
struct AgentOptions {
  /// Majorant of the gradient Lipschitz constant; defaults to 1.01 * beta.
  std::optional<double> L;
  /// Quadratic majorant H >= Hessian(g) replacing L I in the Bregman term.
  std::optional<SymmetricMatrix> H;
  /// Dual step followed by averaging with the consensus plan, weight L (default beta).
  bool regularized_dual = false;
  std::optional<double> regularized_L;
  /// Newton-like price update with Hessian + epsilon I (default epsilon = 1e-6 beta).
  bool second_order_dual = false;
  std::optional<double> epsilon;
};

inline constexpr double kDefaultPrimalMargin = 1.01;
inline constexpr double kDefaultEpsilonScale = 1e-6;
inline constexpr double kDominanceTolerance = 1e-10;
/// Relative slack on rho <= mu so that rounding in the computed mu does not reject rho = mu.
inline constexpr double kCurvatureTolerance = 1e-12;

class AgentSpec {
 public:
  AgentSpec(AgentKind kind, Objective objective, double rho, AgentOptions options = {})
      : kind_(kind), objective_(std::move(objective)), rho_(rho) {
    validate_objective();
    if (!(rho_ > 0.0) || !std::isfinite(rho_)) {
      fail(Errc::InvalidHyperparameter, "rho must be positive and finite");
    }
    const double mu_v = mu();
    const double beta_v = beta();

    if (kind_ != AgentKind::Primal && (options.L || options.H)) {
      fail(Errc::InvalidHyperparameter, "L and H only apply to primal agents");
    }
    if (kind_ != AgentKind::Dual && (options.regularized_dual || options.second_order_dual)) {
      fail(Errc::InvalidHyperparameter, "regularized/second-order updates only apply to dual agents");
    }

    switch (kind_) {
      case AgentKind::Primal: {
        if (!std::isfinite(beta_v)) {
          fail(Errc::InvalidHyperparameter, "primal agents need a finite gradient Lipschitz bound");
        }
        L_ = options.L.value_or(kDefaultPrimalMargin * beta_v);
        if (!(L_ > beta_v)) {
          fail(Errc::InvalidHyperparameter, "primal agent needs L > beta (L = " + std::to_string(L_) +
                                                ", beta = " + std::to_string(beta_v) + ")");
        }
        if (options.H) {
          require_same_size(dim(), options.H->dim(), "majorant H");
          if (const auto* quad = std::get_if<QuadraticObjective>(&objective_)) {
            const auto gap = extreme_eigenvalue_bounds(*options.H - quad->q());
            if (gap.mu < -kDominanceTolerance) {
              fail(Errc::DominanceViolated, "H - Q has eigenvalue " + std::to_string(gap.mu));
            }
          }
          H_ = std::move(options.H);
          h_shift_factor_ = std::make_shared<const CholeskyFactor>(H_->shifted(rho_));
        }
        break;
      }
      case AgentKind::Dual: {
        if (!(rho_ <= mu_v * (1.0 + kCurvatureTolerance))) {
          fail(Errc::InvalidHyperparameter, "dual agent needs rho <= mu (rho = " + std::to_string(rho_) +
                                                ", mu = " + std::to_string(mu_v) + ")");
        }
        if (options.regularized_dual) {
          const double l = options.regularized_L.value_or(beta_v);
          if (!(l > 0.0) || !std::isfinite(l)) {
            fail(Errc::InvalidHyperparameter, "regularized dual needs finite L > 0");
          }
          if (rho_ * (l - mu_v) > mu_v * l) {
            fail(Errc::InvalidHyperparameter, "regularized dual needs rho (L - mu) <= mu L");
          }
          regularized_L_ = l;
        }
        if (options.second_order_dual) {
          const double eps = options.epsilon.value_or(kDefaultEpsilonScale * beta_v);
          if (!(eps >= 0.0) || !std::isfinite(eps)) {
            fail(Errc::InvalidHyperparameter, "second-order epsilon must be finite and >= 0");
          }
          epsilon_ = eps;
        }
        break;
      }
      case AgentKind::Proximal:
        break;
    }
  }

  AgentKind kind() const { return kind_; }
  double rho() const { return rho_; }
  const Objective& objective() const { return objective_; }

  Eigen::Index dim() const {
    return std::visit(
        [](const auto& obj) -> Eigen::Index {
          if constexpr (std::is_same_v<std::decay_t<decltype(obj)>, QuadraticObjective>) {
            return obj.dim();
          } else {
            return obj.dimension;
          }
        },
        objective_);
  }

  double mu() const {
    if (const auto* q = quadratic_ptr()) return q->mu();
    return std::get<OracleBundle>(objective_).mu;
  }
  double beta() const {
    if (const auto* q = quadratic_ptr()) return q->beta();
    return std::get<OracleBundle>(objective_).beta;
  }

  bool is_quadratic() const { return quadratic_ptr() != nullptr; }
  const QuadraticObjective* quadratic_ptr() const { return std::get_if<QuadraticObjective>(&objective_); }
  const QuadraticObjective& quadratic() const {
    if (const auto* q = quadratic_ptr()) return *q;
    fail(Errc::OracleUnavailable, "agent is not a quadratic objective");
  }

  /// Primal agents only.
  double L() const {
    require_kind(AgentKind::Primal, "L");
    return L_;
  }
  const std::optional<SymmetricMatrix>& H() const { return H_; }
  const CholeskyFactor& h_shift_factor() const {
    if (!h_shift_factor_) fail(Errc::InvalidHyperparameter, "agent has no majorant H");
    return *h_shift_factor_;
  }

  std::optional<double> regularized_L() const { return regularized_L_; }
  std::optional<double> epsilon() const { return epsilon_; }

  /// Copy with a different learning rate; all invariants are rechecked.
  AgentSpec with_rho(double rho) const {
    AgentOptions options;
    if (kind_ == AgentKind::Primal) {
      options.L = L_;
      options.H = H_;
    }
    if (regularized_L_) {
      options.regularized_dual = true;
      options.regularized_L = regularized_L_;
    }
    if (epsilon_) {
      options.second_order_dual = true;
      options.epsilon = epsilon_;
    }
    return AgentSpec(kind_, objective_, rho, std::move(options));
  }

  void require_kind(AgentKind expected, const char* op) const {
    if (kind_ != expected) {
      fail(Errc::WrongKind, std::string(op) + " needs a " + std::string(kind_name(expected)) +
                                " agent, got " + std::string(kind_name(kind_)));
    }
  }

 private:
  void validate_objective() const {
    const auto* bundle = std::get_if<OracleBundle>(&objective_);
    if (!bundle) return;
    if (bundle->dimension <= 0) fail(Errc::InvalidConfig, "oracle bundle needs a positive dimension");
    if (!(bundle->mu >= 0.0) || !(bundle->beta >= bundle->mu)) {
      fail(Errc::InvalidCurvature, "oracle bundle needs 0 <= mu <= beta");
    }
    if (!bundle->value) fail(Errc::OracleUnavailable, "oracle bundle needs a value callback");
    switch (kind_) {
      case AgentKind::Primal:
        if (!bundle->gradient) fail(Errc::OracleUnavailable, "primal bundle needs a gradient callback");
        break;
      case AgentKind::Dual:
        if (!bundle->conjugate_argmin) {
          fail(Errc::OracleUnavailable, "dual bundle needs a conjugate_argmin callback");
        }
        break;
      case AgentKind::Proximal:
        if (!bundle->prox) fail(Errc::OracleUnavailable, "proximal bundle needs a prox callback");
        break;
    }
  }

  AgentKind kind_;
  Objective objective_;
  double rho_;
  double L_ = std::numeric_limits<double>::infinity();
  std::optional<SymmetricMatrix> H_;
  std::shared_ptr<const CholeskyFactor> h_shift_factor_;
  std::optional<double> regularized_L_;
  std::optional<double> epsilon_;
};

inline AgentSpec make_primal_agent(Objective objective, double rho, AgentOptions options = {}) {
  return AgentSpec(AgentKind::Primal, std::move(objective), rho, std::move(options));
}
inline AgentSpec make_dual_agent(Objective objective, double rho, AgentOptions options = {}) {
  return AgentSpec(AgentKind::Dual, std::move(objective), rho, std::move(options));
}
inline AgentSpec make_proximal_agent(Objective objective, double rho, AgentOptions options = {}) {
  return AgentSpec(AgentKind::Proximal, std::move(objective), rho, std::move(options));
}

// ---------------------------------------------------------------------------
// Oracles

inline double objective_value(const AgentSpec& agent, const Vector& x) {
  require_same_size(agent.dim(), x.size(), "objective_value");
  if (const auto* q = agent.quadratic_ptr()) return q->value(x);
  return std::get<OracleBundle>(agent.objective()).value(x);
}

/// Gradient of g regardless of kind. Coordinator code goes through
/// primal_oracle instead; this is for diagnostics and reference solvers.
inline Vector objective_gradient(const AgentSpec& agent, const Vector& x) {
  require_same_size(agent.dim(), x.size(), "objective_gradient");
  if (const auto* q = agent.quadratic_ptr()) return q->gradient(x);
  const auto& bundle = std::get<OracleBundle>(agent.objective());
  if (!bundle.gradient) fail(Errc::OracleUnavailable, "bundle has no gradient callback");
  return bundle.gradient(x);
}

struct PrimalOracleResult {
  double value;
  Vector gradient;
};

inline PrimalOracleResult primal_oracle(const AgentSpec& agent, const Vector& x) {
  agent.require_kind(AgentKind::Primal, "primal_oracle");
  require_same_size(agent.dim(), x.size(), "primal_oracle");
  if (const auto* q = agent.quadratic_ptr()) return {q->value(x), q->gradient(x)};
  const auto& bundle = std::get<OracleBundle>(agent.objective());
  return {bundle.value(x), bundle.gradient(x)};
}

/// argmin_x g(x) - lambda^T x; Q^{-1}(lambda - b) for quadratics.
inline Vector dual_oracle(const AgentSpec& agent, const Vector& lambda) {
  agent.require_kind(AgentKind::Dual, "dual_oracle");
  require_same_size(agent.dim(), lambda.size(), "dual_oracle");
  if (const auto* q = agent.quadratic_ptr()) return q->factor().solve(lambda - q->b());
  return std::get<OracleBundle>(agent.objective()).conjugate_argmin(lambda);
}

/// argmin_x g(x) - lambda^T x + rho/2 ||z - x||^2; (Q + rho I)^{-1}(rho z + lambda - b) for quadratics.
inline Vector proximal_oracle(const AgentSpec& agent, const Vector& lambda, const Vector& z, double rho) {
  agent.require_kind(AgentKind::Proximal, "proximal_oracle");
  require_same_size(agent.dim(), lambda.size(), "proximal_oracle lambda");
  require_same_size(agent.dim(), z.size(), "proximal_oracle z");
  if (!(rho > 0.0)) fail(Errc::InvalidHyperparameter, "proximal_oracle needs rho > 0");
  if (const auto* q = agent.quadratic_ptr()) {
    return q->shifted_factor(rho)->solve(rho * z + lambda - q->b());
  }
  return std::get<OracleBundle>(agent.objective()).prox(lambda, z, rho);
}

inline SymmetricMatrix agent_hessian(const AgentSpec& agent, const Vector& x) {
  if (const auto* q = agent.quadratic_ptr()) return q->q();
  const auto& bundle = std::get<OracleBundle>(agent.objective());
  if (!bundle.hessian) fail(Errc::HessianUnavailable, "agent exposes no Hessian");
  return SymmetricMatrix::symmetrized(bundle.hessian(x));
}

}  // namespace tacp

#endif  // TACP_AGENTS_HPP
