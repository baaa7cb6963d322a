#include "maxlin/conditional.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "maxlin/error.hpp"

namespace maxlin {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

ClassWeights normalize(std::vector<double> log_weights, std::size_t class_index) {
  ClassWeights cw;
  cw.log_weights = std::move(log_weights);
  const double total = log_sum_exp(cw.log_weights);
  if (!std::isfinite(total)) {
    throw Error(Errc::NumericalUnderflow,
                "all weights of class " + std::to_string(class_index) + " vanish");
  }
  cw.probabilities.resize(cw.log_weights.size());
  cw.cumulative.resize(cw.log_weights.size());
  double run = 0.0;
  for (std::size_t k = 0; k < cw.log_weights.size(); ++k) {
    cw.probabilities[k] = std::exp(cw.log_weights[k] - total);
    run += cw.probabilities[k];
    cw.cumulative[k] = run;
  }
  cw.cumulative.back() = 1.0;
  return cw;
}

void check_margins(const HittingStructure& structure, std::span<const MarginSpec> margins) {
  if (margins.size() != structure.z_hat.size()) {
    throw Error(Errc::MarginCountMismatch, "margin count differs from column count");
  }
}

}  // namespace

double log_sum_exp(std::span<const double> values) noexcept {
  double hi = kNegInf;
  for (double v : values) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

double ClassWeights::log_total() const noexcept { return log_sum_exp(log_weights); }

std::vector<ClassWeights> class_weights(const HittingStructure& structure,
                                        std::span<const MarginSpec> margins) {
  check_margins(structure, margins);
  const auto& z_hat = structure.z_hat;
  const auto& d = structure.classes;
  std::vector<ClassWeights> out;
  out.reserve(d.rank());
  for (std::size_t s = 0; s < d.rank(); ++s) {
    // sum of log F over the touching set, tracking columns with F = 0 separately
    double log_f_sum = 0.0;
    std::size_t zero_mass = 0;
    for (std::size_t k : d.touching[s]) {
      const double lf = margins[k].log_cdf(z_hat[k]);
      if (std::isinf(lf)) {
        ++zero_mass;
      } else {
        log_f_sum += lf;
      }
    }
    std::vector<double> lw;
    lw.reserve(d.hitting[s].size());
    for (std::size_t j : d.hitting[s]) {
      const double lf_j = margins[j].log_cdf(z_hat[j]);
      const bool j_zero = std::isinf(lf_j);
      const std::size_t others_zero = zero_mass - (j_zero ? 1 : 0);
      if (others_zero > 0) {
        lw.push_back(kNegInf);
        continue;
      }
      const double rest = j_zero ? log_f_sum : log_f_sum - lf_j;
      lw.push_back(std::log(z_hat[j]) + margins[j].log_density(z_hat[j]) + rest);
    }
    out.push_back(normalize(std::move(lw), s));
  }
  return out;
}

std::vector<ClassWeights> frechet_class_weights(const HittingStructure& structure,
                                                std::span<const MarginSpec> margins) {
  check_margins(structure, margins);
  for (const auto& m : margins) {
    if (!m.is_frechet()) throw Error(Errc::MixedMarginKinds, "non-Frechet margin present");
  }
  const auto& d = structure.classes;
  std::vector<ClassWeights> out;
  out.reserve(d.rank());
  for (std::size_t s = 0; s < d.rank(); ++s) {
    std::vector<double> lw;
    for (std::size_t j : d.hitting[s]) {
      const auto& f = margins[j].as_frechet();
      lw.push_back(std::log(f.alpha) + f.alpha * (std::log(f.scale) - std::log(structure.z_hat[j])));
    }
    out.push_back(normalize(std::move(lw), s));
  }
  return out;
}

ConditionalLaw::ConditionalLaw(HittingStructure structure, std::vector<ClassWeights> weights,
                               std::vector<MarginSpec> margins)
    : structure_(std::move(structure)), weights_(std::move(weights)), margins_(std::move(margins)) {
  if (weights_.size() != structure_.rank() || margins_.size() != structure_.z_hat.size()) {
    throw Error(Errc::DimensionMismatch, "conditional law parts disagree in size");
  }
}

ConditionalLaw build_conditional_law(const MaxLinearModel& model, std::span<const double> x,
                                     double rel_tol) {
  HittingStructure hs = analyze(model, x, rel_tol);
  auto weights = class_weights(hs, model.margins());
  return ConditionalLaw(std::move(hs), std::move(weights), model.margins());
}

std::vector<std::vector<std::size_t>> enumerate_relevant_scenarios(const HitMatrix& hits) {
  const std::size_t n = hits.rows();
  const std::size_t p = hits.cols();
  if (p > kMaxBruteForceColumns) {
    throw Error(Errc::TooLargeForBruteForce,
                std::to_string(p) + " columns exceeds the enumeration cap of " +
                    std::to_string(kMaxBruteForceColumns));
  }
  // Row coverage of each column as a multiword bitset.
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> cover(p * words, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (hits(i, j)) cover[j * words + i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }
  std::vector<std::uint64_t> full(words, ~std::uint64_t{0});
  if (n % 64 != 0) full.back() = (std::uint64_t{1} << (n % 64)) - 1;

  std::vector<std::vector<std::size_t>> found;
  std::vector<std::uint64_t> acc(words);
  const std::uint64_t limit = std::uint64_t{1} << p;
  for (std::size_t k = 1; k <= p && found.empty(); ++k) {
    // Gosper's hack: all p-bit masks with k bits set, in increasing order.
    for (std::uint64_t mask = (std::uint64_t{1} << k) - 1; mask < limit;) {
      std::fill(acc.begin(), acc.end(), 0);
      for (std::uint64_t m = mask; m != 0; m &= m - 1) {
        const auto j = static_cast<std::size_t>(std::countr_zero(m));
        for (std::size_t w = 0; w < words; ++w) acc[w] |= cover[j * words + w];
      }
      if (acc == full) {
        std::vector<std::size_t> cols;
        for (std::uint64_t m = mask; m != 0; m &= m - 1) {
          cols.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        }
        found.push_back(std::move(cols));
      }
      const std::uint64_t c = mask & (~mask + 1);
      const std::uint64_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

ScenarioLaw scenario_probabilities(std::vector<std::vector<std::size_t>> scenarios,
                                   std::span<const MarginSpec> margins,
                                   std::span<const double> z_hat) {
  if (scenarios.empty()) throw Error(Errc::EmptyScenarioList, "no scenarios to weight");
  if (margins.size() != z_hat.size()) {
    throw Error(Errc::MarginCountMismatch, "margin count differs from bound count");
  }
  const std::size_t r = scenarios.front().size();
  ScenarioLaw law;
  law.z_hat.assign(z_hat.begin(), z_hat.end());
  law.margins.assign(margins.begin(), margins.end());
  const std::size_t p = z_hat.size();
  std::vector<bool> in_scenario(p);
  for (const auto& sc : scenarios) {
    if (sc.size() != r) throw Error(Errc::DimensionMismatch, "scenarios differ in size");
    std::fill(in_scenario.begin(), in_scenario.end(), false);
    for (std::size_t j : sc) in_scenario.at(j) = true;
    double lw = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      lw += in_scenario[j] ? std::log(z_hat[j]) + margins[j].log_density(z_hat[j])
                           : margins[j].log_cdf(z_hat[j]);
    }
    law.log_weights.push_back(lw);
  }
  const double total = log_sum_exp(law.log_weights);
  if (!std::isfinite(total)) throw Error(Errc::NumericalUnderflow, "all scenario weights vanish");
  for (double lw : law.log_weights) law.probabilities.push_back(std::exp(lw - total));
  law.scenarios = std::move(scenarios);
  return law;
}

}  // namespace maxlin
