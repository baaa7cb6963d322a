#pragma once

#include <stdexcept>
#include <string>

namespace maxlin {

enum class Errc {
  NonFiniteEntry,
  NegativeEntry,
  ZeroRow,
  ZeroColumn,
  MarginCountMismatch,
  DimensionMismatch,
  InvalidMargin,
  InvalidObservation,
  MalformedHittingMatrix,
  InconsistentObservation,
  EmptyScenarioClass,
  NumericalUnderflow,
  MixedMarginKinds,
  TooLargeForBruteForce,
  EmptyScenarioList,
  ZeroMassBelowBound,
  AcceptanceTooRare,
  NonStationary,
  NotPureMar,
  DimensionOverflow,
  AssumptionAViolation,
  InvalidSpec,
  Io,
};

const char* to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  Errc code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace maxlin
