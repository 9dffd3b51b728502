#ifndef TACP_ERRORS_HPP
#define TACP_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace tacp {

enum class Errc {
  DimensionMismatch,
  NotSymmetric,
  NotPositiveDefinite,
  NonFinite,
  WrongKind,
  InvalidHyperparameter,
  InvalidCurvature,
  DominanceViolated,
  HessianUnavailable,
  OracleUnavailable,
  EmptyAgentList,
  InvalidConfig,
  UnsupportedMix,
  AssumptionViolated,
  ZeroOptimalValue,
  NoConvergence,
  IndivisibleSplit,
  InvariantViolated,
  ParseError,
  IoError,
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::NonFinite: return "NonFinite";
    case Errc::WrongKind: return "WrongKind";
    case Errc::InvalidHyperparameter: return "InvalidHyperparameter";
    case Errc::InvalidCurvature: return "InvalidCurvature";
    case Errc::DominanceViolated: return "DominanceViolated";
    case Errc::HessianUnavailable: return "HessianUnavailable";
    case Errc::OracleUnavailable: return "OracleUnavailable";
    case Errc::EmptyAgentList: return "EmptyAgentList";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::UnsupportedMix: return "UnsupportedMix";
    case Errc::AssumptionViolated: return "AssumptionViolated";
    case Errc::ZeroOptimalValue: return "ZeroOptimalValue";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::IndivisibleSplit: return "IndivisibleSplit";
    case Errc::InvariantViolated: return "InvariantViolated";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace tacp

#endif  // TACP_ERRORS_HPP
