#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bst {

enum class ErrorCode {
  NotStarShaped,
  NotEmbedded,
  OddModePresent,
  NotAGraph,
  OnCoincidenceSet,
  GrazingRay,
  NoConvergence,
  DegenerateFamily,
  NoneFound,
  DegenerateOrbit,
  DegenerateDenominator,
  ZeroEigenvalue,
  InsufficientJet,
  BadSetSingular,
  InconsistentSignature,
  VanishingThirdDerivative,
  ConditionViolated,
  InvalidInput,
};

std::string_view to_string(ErrorCode code);

/// Error raised by every library operation. The code identifies which
/// precondition or numerical guard failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bst
