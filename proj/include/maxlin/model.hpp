#pragma once

#include <span>
#include <vector>

#include "maxlin/margin.hpp"
#include "maxlin/matrix.hpp"

namespace maxlin {

// X = A (.) Z with (A (.) z)_i = max_j a_ij z_j, over independent factors Z_j.
// Only obtainable through validate_model, so every instance satisfies:
// finite nonnegative entries, no zero row, no zero column, one margin per column.
class MaxLinearModel {
 public:
  const Matrix& coefficients() const noexcept { return a_; }
  const std::vector<MarginSpec>& margins() const noexcept { return margins_; }
  std::size_t n() const noexcept { return a_.rows(); }
  std::size_t p() const noexcept { return a_.cols(); }

 private:
  friend MaxLinearModel validate_model(Matrix a, std::vector<MarginSpec> margins);
  MaxLinearModel(Matrix a, std::vector<MarginSpec> margins)
      : a_(std::move(a)), margins_(std::move(margins)) {}

  Matrix a_;
  std::vector<MarginSpec> margins_;
};

// Errors, checked in this order: NonFiniteEntry, NegativeEntry, MarginCountMismatch,
// ZeroRow, ZeroColumn. Empty matrices are DimensionMismatch.
MaxLinearModel validate_model(Matrix a, std::vector<MarginSpec> margins);

std::vector<double> max_linear_apply(const Matrix& a, std::span<const double> z);

// Throws InvalidObservation unless every entry is finite and strictly positive.
void check_observation(std::span<const double> x);

}  // namespace maxlin
