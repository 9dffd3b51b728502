#ifndef TACP_TACP_HPP
#define TACP_TACP_HPP

#include "tacp/errors.hpp"
#include "tacp/numerics.hpp"
#include "tacp/agents.hpp"
#include "tacp/coordinator.hpp"
#include "tacp/residuals.hpp"
#include "tacp/acceleration.hpp"
#include "tacp/solve.hpp"
#include "tacp/saddle_point.hpp"
#include "tacp/diagnostics.hpp"
#include "tacp/reference.hpp"

#endif  // TACP_TACP_HPP
