#include "maxlin/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "maxlin/error.hpp"

namespace maxlin {
namespace {

std::size_t pick(std::span<const double> cumulative, double u) noexcept {
  const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

}  // namespace

double truncated_draw(const MarginSpec& margin, double bound, RngStream& rng) {
  if (!(bound > 0.0)) throw Error(Errc::ZeroMassBelowBound, "bound must be positive");
  const double log_mass = std::isinf(bound) ? 0.0 : margin.log_cdf(bound);
  if (std::isinf(log_mass)) {
    throw Error(Errc::ZeroMassBelowBound, "no probability mass below " + std::to_string(bound));
  }
  // Rounding can land exactly on the bound; redraw to keep the inequality strict.
  for (;;) {
    const double z = margin.quantile_from_log(std::log(rng.uniform()) + log_mass);
    if (z < bound) return z;
  }
}

ConditionalSample draw_conditional(const ConditionalLaw& law, RngStream& rng) {
  const auto& d = law.structure().classes;
  const auto& z_hat = law.z_hat();
  const auto& margins = law.margins();
  ConditionalSample out;
  out.z.assign(law.p(), 0.0);
  out.chosen.resize(d.rank());
  for (std::size_t s = 0; s < d.rank(); ++s) {
    const auto& cw = law.weights()[s];
    const std::size_t j_star = d.hitting[s][pick(cw.cumulative, rng.uniform())];
    out.chosen[s] = j_star;
    for (std::size_t k : d.touching[s]) {
      out.z[k] = k == j_star ? z_hat[k] : truncated_draw(margins[k], z_hat[k], rng);
    }
  }
  return out;
}

ConditionalSample draw_by_scenario(const ScenarioLaw& law, RngStream& rng) {
  std::vector<double> cumulative(law.probabilities.size());
  double run = 0.0;
  for (std::size_t k = 0; k < cumulative.size(); ++k) cumulative[k] = run += law.probabilities[k];
  cumulative.back() = 1.0;
  const auto& scenario = law.scenarios[pick(cumulative, rng.uniform())];

  ConditionalSample out;
  out.chosen = scenario;
  out.z.assign(law.z_hat.size(), 0.0);
  std::vector<bool> pinned(law.z_hat.size(), false);
  for (std::size_t j : scenario) pinned[j] = true;
  for (std::size_t j = 0; j < law.z_hat.size(); ++j) {
    out.z[j] = pinned[j] ? law.z_hat[j] : truncated_draw(law.margins[j], law.z_hat[j], rng);
  }
  return out;
}

std::vector<double> predict(const Matrix& b, const ConditionalSample& sample) {
  return max_linear_apply(b, sample.z);
}

Matrix sample_batch(const ConditionalLaw& law, std::size_t count, std::uint64_t seed) {
  Matrix out(count, law.p());
  const auto n = static_cast<std::int64_t>(count);
  // Exceptions must not cross the parallel region.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      RngStream rng(seed, static_cast<std::uint64_t>(k));
      const auto sample = draw_conditional(law, rng);
      std::copy(sample.z.begin(), sample.z.end(), out.row(static_cast<std::size_t>(k)).begin());
    } catch (...) {
#pragma omp critical(maxlin_sample_batch)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

Matrix sample_batch_serial(const ConditionalLaw& law, std::size_t count, std::uint64_t seed) {
  Matrix out(count, law.p());
  for (std::size_t k = 0; k < count; ++k) {
    RngStream rng(seed, k);
    const auto sample = draw_conditional(law, rng);
    std::copy(sample.z.begin(), sample.z.end(), out.row(k).begin());
  }
  return out;
}

RejectionResult rejection_oracle(const MaxLinearModel& model, std::span<const double> x,
                                 double epsilon, std::size_t num_accepted, RngStream& rng,
                                 std::uint64_t max_proposals) {
  if (x.size() != model.n()) throw Error(Errc::DimensionMismatch, "observation length");
  check_observation(x);
  if (!(epsilon > 0.0)) throw Error(Errc::InvalidSpec, "epsilon must be positive");
  const Matrix& a = model.coefficients();
  const std::size_t n = model.n();
  const std::size_t p = model.p();

  std::vector<double> upper(n);
  for (std::size_t i = 0; i < n; ++i) upper[i] = x[i] * (1.0 + epsilon);

  RejectionResult result;
  std::vector<double> z(p);
  std::vector<double> ax(n);
  while (result.accepted.size() < num_accepted) {
    if (result.proposals >= max_proposals) {
      throw Error(Errc::AcceptanceTooRare,
                  "accepted " + std::to_string(result.accepted.size()) + " of " +
                      std::to_string(result.proposals) + " proposals (rate " +
                      std::to_string(result.acceptance_rate()) + ")");
    }
    ++result.proposals;
    // Columns are independent, so a proposal can be dropped as soon as one
    // coordinate pushes a row above its band; the remaining draws are skipped.
    std::fill(ax.begin(), ax.end(), 0.0);
    bool alive = true;
    for (std::size_t j = 0; j < p && alive; ++j) {
      z[j] = model.margins()[j].quantile(rng.uniform());
      for (std::size_t i = 0; i < n; ++i) {
        const double v = a(i, j) * z[j];
        if (v > upper[i]) {
          alive = false;
          break;
        }
        ax[i] = std::max(ax[i], v);
      }
    }
    if (!alive) continue;
    bool inside = true;
    for (std::size_t i = 0; i < n && inside; ++i) inside = ax[i] >= x[i] * (1.0 - epsilon);
    if (inside) result.accepted.push_back(z);
  }
  return result;
}

}  // namespace maxlin
