#include "bst/error.hpp"

namespace bst {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotStarShaped: return "NotStarShaped";
    case ErrorCode::NotEmbedded: return "NotEmbedded";
    case ErrorCode::OddModePresent: return "OddModePresent";
    case ErrorCode::NotAGraph: return "NotAGraph";
    case ErrorCode::OnCoincidenceSet: return "OnCoincidenceSet";
    case ErrorCode::GrazingRay: return "GrazingRay";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateFamily: return "DegenerateFamily";
    case ErrorCode::NoneFound: return "NoneFound";
    case ErrorCode::DegenerateOrbit: return "DegenerateOrbit";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::ZeroEigenvalue: return "ZeroEigenvalue";
    case ErrorCode::InsufficientJet: return "InsufficientJet";
    case ErrorCode::BadSetSingular: return "BadSetSingular";
    case ErrorCode::InconsistentSignature: return "InconsistentSignature";
    case ErrorCode::VanishingThirdDerivative: return "VanishingThirdDerivative";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace bst
