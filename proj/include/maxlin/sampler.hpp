#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "maxlin/conditional.hpp"
#include "maxlin/rng.hpp"

namespace maxlin {

struct ConditionalSample {
  std::vector<double> z;
  // chosen[s] is the column of class s that attains its bound in this draw.
  std::vector<std::size_t> chosen;
};

// Draw from the law of Z conditioned on Z < bound, by inverse CDF at U * F(bound).
// bound may be +inf (unconditional draw). Throws ZeroMassBelowBound if F(bound) == 0.
double truncated_draw(const MarginSpec& margin, double bound, RngStream& rng);

// One exact draw: per class, pick a hitting column by its weight, pin it to its
// bound and draw every other touching column strictly below its bound.
ConditionalSample draw_conditional(const ConditionalLaw& law, RngStream& rng);

// Brute-force route: pick a whole scenario J by p_J, pin J, truncate the rest.
// chosen lists the scenario's columns in ascending order.
ConditionalSample draw_by_scenario(const ScenarioLaw& law, RngStream& rng);

std::vector<double> predict(const Matrix& b, const ConditionalSample& sample);

// count samples, sample k drawn from RngStream(seed, k); one sample per row.
// Identical results regardless of thread count.
Matrix sample_batch(const ConditionalLaw& law, std::size_t count, std::uint64_t seed);
Matrix sample_batch_serial(const ConditionalLaw& law, std::size_t count, std::uint64_t seed);

struct RejectionResult {
  std::vector<std::vector<double>> accepted;
  std::uint64_t proposals = 0;
  double acceptance_rate() const noexcept {
    return proposals == 0 ? 0.0 : static_cast<double>(accepted.size()) / static_cast<double>(proposals);
  }
};

// Plain rejection sampler: propose Z from the margins, accept when
// |(A (.) Z)_i - x_i| <= epsilon x_i for every row. Throws AcceptanceTooRare once
// max_proposals is spent before num_accepted acceptances.
RejectionResult rejection_oracle(const MaxLinearModel& model, std::span<const double> x,
                                 double epsilon, std::size_t num_accepted, RngStream& rng,
                                 std::uint64_t max_proposals = 4'000'000'000ULL);

}  // namespace maxlin
