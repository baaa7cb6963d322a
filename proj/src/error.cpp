#include "maxlin/error.hpp"

namespace maxlin {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonFiniteEntry: return "NonFiniteEntry";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::ZeroRow: return "ZeroRow";
    case Errc::ZeroColumn: return "ZeroColumn";
    case Errc::MarginCountMismatch: return "MarginCountMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidMargin: return "InvalidMargin";
    case Errc::InvalidObservation: return "InvalidObservation";
    case Errc::MalformedHittingMatrix: return "MalformedHittingMatrix";
    case Errc::InconsistentObservation: return "InconsistentObservation";
    case Errc::EmptyScenarioClass: return "EmptyScenarioClass";
    case Errc::NumericalUnderflow: return "NumericalUnderflow";
    case Errc::MixedMarginKinds: return "MixedMarginKinds";
    case Errc::TooLargeForBruteForce: return "TooLargeForBruteForce";
    case Errc::EmptyScenarioList: return "EmptyScenarioList";
    case Errc::ZeroMassBelowBound: return "ZeroMassBelowBound";
    case Errc::AcceptanceTooRare: return "AcceptanceTooRare";
    case Errc::NonStationary: return "NonStationary";
    case Errc::NotPureMar: return "NotPureMar";
    case Errc::DimensionOverflow: return "DimensionOverflow";
    case Errc::AssumptionAViolation: return "AssumptionAViolation";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace maxlin
