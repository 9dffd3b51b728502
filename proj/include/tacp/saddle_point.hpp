#ifndef TACP_SADDLE_POINT_HPP
#define TACP_SADDLE_POINT_HPP

#include <vector>

#include "tacp/coordinator.hpp"
#include "tacp/numerics.hpp"

namespace tacp {

/// Reference optimum (x*, z*, lambda*): x_i* = z*, sum_i lambda_i* = 0.
struct SaddlePoint {
  std::vector<Vector> x_star;
  Vector z_star;
  std::vector<Vector> lambda_star;

  /// Coordinator state sitting exactly at the saddle point.
  CoordinatorState as_state() const {
    CoordinatorState s;
    s.x = x_star;
    s.z = z_star;
    s.lambda = lambda_star;
    s.k = 0;
    return s;
  }
};

}  // namespace tacp

#endif  // TACP_SADDLE_POINT_HPP
