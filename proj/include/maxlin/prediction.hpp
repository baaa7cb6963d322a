#pragma once

#include <cstdint>
#include <vector>

#include "maxlin/sampler.hpp"

namespace maxlin {

// "Observe X = A (.) Z, predict Y = B (.) Z" over a shared factor vector Z.
// Columns of A that are entirely zero are not constrained by the observation;
// they are drawn from their unconditional margins. The remaining columns form
// a validated MaxLinearModel and are drawn from its conditional law.
class PredictionTask {
 public:
  PredictionTask(Matrix a, Matrix b, std::vector<MarginSpec> margins, std::vector<double> x,
                 double rel_tol = kDefaultRelTol);

  const Matrix& observation_matrix() const noexcept { return a_; }
  const Matrix& prediction_matrix() const noexcept { return b_; }
  const std::vector<double>& observation() const noexcept { return x_; }
  const MaxLinearModel& model() const noexcept { return model_; }
  const ConditionalLaw& law() const noexcept { return law_; }
  const std::vector<std::size_t>& constrained_columns() const noexcept { return constrained_; }
  const std::vector<std::size_t>& free_columns() const noexcept { return free_; }
  std::size_t p() const noexcept { return a_.cols(); }

  // Full-length factor vector; chosen columns are reported in full indexing.
  ConditionalSample draw(RngStream& rng) const;

  // Row k drawn from RngStream(seed, k).
  Matrix sample_factors(std::size_t count, std::uint64_t seed) const;
  Matrix sample_factors_serial(std::size_t count, std::uint64_t seed) const;

  // Row k is B (.) factors.row(k).
  Matrix predict(const Matrix& factors) const;

  // Infimum of the support of each Y_i under the conditional law, assuming every
  // margin is supported down to 0: max over classes of min over that class's
  // hitting columns of b_ij z_hat_j (zero-weight columns skipped).
  std::vector<double> lower_endpoints() const;

 private:
  Matrix a_;
  Matrix b_;
  std::vector<MarginSpec> margins_;
  std::vector<double> x_;
  std::vector<std::size_t> constrained_;
  std::vector<std::size_t> free_;
  MaxLinearModel model_;
  ConditionalLaw law_;
};

}  // namespace maxlin
