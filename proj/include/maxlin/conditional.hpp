#pragma once

#include <span>
#include <vector>

#include "maxlin/hitting.hpp"

namespace maxlin {

// Mixture weights over the hitting columns of one class, aligned with
// Decomposition::hitting[s]. log_weights are unnormalized.
struct ClassWeights {
  std::vector<double> log_weights;
  std::vector<double> probabilities;  // normalized, sums to 1
  std::vector<double> cumulative;     // running sums of probabilities, last entry exactly 1

  double log_total() const noexcept;  // log of the sum of exp(log_weights)
};

// w_j = z_hat_j f_j(z_hat_j) prod_{k in touching(s), k != j} F_k(z_hat_k), evaluated in
// log space. Throws NumericalUnderflow if every weight of a class is zero.
std::vector<ClassWeights> class_weights(const HittingStructure& structure,
                                        std::span<const MarginSpec> margins);

// Frechet shortcut: w_j proportional to alpha_j sigma_j^alpha_j z_hat_j^(-alpha_j).
// Factors common to the whole class are dropped, so only the normalized
// probabilities are comparable with class_weights. Throws MixedMarginKinds.
std::vector<ClassWeights> frechet_class_weights(const HittingStructure& structure,
                                                std::span<const MarginSpec> margins);

// Conditional law of Z given X = x in factorized form: one independent
// mixture per class.
class ConditionalLaw {
 public:
  ConditionalLaw(HittingStructure structure, std::vector<ClassWeights> weights,
                 std::vector<MarginSpec> margins);

  const HittingStructure& structure() const noexcept { return structure_; }
  const std::vector<ClassWeights>& weights() const noexcept { return weights_; }
  const std::vector<MarginSpec>& margins() const noexcept { return margins_; }
  const std::vector<double>& z_hat() const noexcept { return structure_.z_hat; }
  std::size_t p() const noexcept { return structure_.z_hat.size(); }
  std::size_t rank() const noexcept { return structure_.rank(); }

 private:
  HittingStructure structure_;
  std::vector<ClassWeights> weights_;
  std::vector<MarginSpec> margins_;
};

ConditionalLaw build_conditional_law(const MaxLinearModel& model, std::span<const double> x,
                                     double rel_tol = kDefaultRelTol);

// Brute-force representation: every relevant hitting scenario with its probability.
struct ScenarioLaw {
  std::vector<std::vector<std::size_t>> scenarios;  // ascending column indices
  std::vector<double> log_weights;
  std::vector<double> probabilities;
  std::vector<double> z_hat;
  std::vector<MarginSpec> margins;
};

inline constexpr std::size_t kMaxBruteForceColumns = 20;

// All minimum-cardinality column sets covering every row of H, by exhaustive
// search in increasing size. Throws TooLargeForBruteForce when p > 20.
std::vector<std::vector<std::size_t>> enumerate_relevant_scenarios(const HitMatrix& hits);

// p_J = w_J / sum_K w_K with w_J = prod_{j in J} z_hat_j f_j(z_hat_j) prod_{j not in J} F_j(z_hat_j).
ScenarioLaw scenario_probabilities(std::vector<std::vector<std::size_t>> scenarios,
                                   std::span<const MarginSpec> margins,
                                   std::span<const double> z_hat);

double log_sum_exp(std::span<const double> values) noexcept;

}  // namespace maxlin
