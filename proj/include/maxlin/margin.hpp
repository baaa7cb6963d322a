#pragma once

#include <variant>
#include <vector>

namespace maxlin {

// alpha-Frechet law with scale sigma: F(z) = exp(-(sigma/z)^alpha) on (0, inf).
struct Frechet {
  double alpha = 1.0;
  double scale = 1.0;
};

// Piecewise-constant density on the cells [knots[k], knots[k+1]).
// Used to exercise the general-density formulas with something other than Frechet.
class Tabulated {
 public:
  // Throws InvalidMargin unless knots are nonnegative and strictly increasing,
  // densities are nonnegative, and the total mass is 1 within 1e-9.
  Tabulated(std::vector<double> knots, std::vector<double> density);

  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& density_values() const noexcept { return density_; }

  double cdf(double z) const noexcept;
  double density(double z) const noexcept;
  double quantile(double u) const noexcept;

 private:
  std::vector<double> knots_;
  std::vector<double> density_;
  std::vector<double> cumulative_;  // F at each knot
};

// Distribution of one factor Z_j. All evaluation goes through log space where
// the closed form allows it, so products over many columns stay representable.
class MarginSpec {
 public:
  static MarginSpec frechet(double alpha = 1.0, double scale = 1.0);
  static MarginSpec tabulated(std::vector<double> knots, std::vector<double> density);

  bool is_frechet() const noexcept { return std::holds_alternative<Frechet>(law_); }
  // Precondition: is_frechet().
  const Frechet& as_frechet() const { return std::get<Frechet>(law_); }

  double cdf(double z) const noexcept;
  double log_cdf(double z) const noexcept;
  double density(double z) const noexcept;
  double log_density(double z) const noexcept;

  // log(z f(z) / F(z)); the per-column factor that distinguishes hitting weights.
  double log_hazard_ratio(double z) const noexcept;

  double quantile(double u) const noexcept;
  // Quantile at probability exp(log_u); exact for Frechet even when exp(log_u) underflows.
  double quantile_from_log(double log_u) const noexcept;

 private:
  using Law = std::variant<Frechet, Tabulated>;
  explicit MarginSpec(Law law) : law_(std::move(law)) {}
  Law law_;
};

}  // namespace maxlin
