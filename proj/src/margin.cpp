#include "maxlin/margin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxlin/error.hpp"

namespace maxlin {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Tabulated::Tabulated(std::vector<double> knots, std::vector<double> density)
    : knots_(std::move(knots)), density_(std::move(density)) {
  if (knots_.size() < 2 || density_.size() + 1 != knots_.size()) {
    throw Error(Errc::InvalidMargin, "tabulated margin needs K+1 knots for K cells");
  }
  if (!(knots_.front() >= 0.0) || !std::isfinite(knots_.back())) {
    throw Error(Errc::InvalidMargin, "tabulated support must lie in [0, inf)");
  }
  for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
    if (!(knots_[k + 1] > knots_[k])) {
      throw Error(Errc::InvalidMargin, "tabulated knots must be strictly increasing");
    }
  }
  cumulative_.assign(knots_.size(), 0.0);
  for (std::size_t k = 0; k < density_.size(); ++k) {
    if (!(density_[k] >= 0.0) || !std::isfinite(density_[k])) {
      throw Error(Errc::InvalidMargin, "tabulated density must be finite and nonnegative");
    }
    cumulative_[k + 1] = cumulative_[k] + density_[k] * (knots_[k + 1] - knots_[k]);
  }
  if (std::abs(cumulative_.back() - 1.0) > 1e-9) {
    throw Error(Errc::InvalidMargin,
                "tabulated density integrates to " + std::to_string(cumulative_.back()));
  }
  cumulative_.back() = 1.0;
}

double Tabulated::cdf(double z) const noexcept {
  if (z <= knots_.front()) return 0.0;
  if (z >= knots_.back()) return 1.0;
  const auto k = static_cast<std::size_t>(
      std::upper_bound(knots_.begin(), knots_.end(), z) - knots_.begin() - 1);
  return cumulative_[k] + density_[k] * (z - knots_[k]);
}

double Tabulated::density(double z) const noexcept {
  if (z < knots_.front() || z >= knots_.back()) return 0.0;
  const auto k = static_cast<std::size_t>(
      std::upper_bound(knots_.begin(), knots_.end(), z) - knots_.begin() - 1);
  return density_[k];
}

double Tabulated::quantile(double u) const noexcept {
  if (u <= 0.0) return knots_.front();
  if (u >= 1.0) return knots_.back();
  // First knot whose cumulative mass reaches u; zero-density cells are skipped.
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto k = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  const double z = knots_[k] + (u - cumulative_[k]) / density_[k];
  return std::min(z, knots_[k + 1]);
}

MarginSpec MarginSpec::frechet(double alpha, double scale) {
  if (!(alpha > 0.0) || !(scale > 0.0) || !std::isfinite(alpha) || !std::isfinite(scale)) {
    throw Error(Errc::InvalidMargin, "Frechet alpha and scale must be positive and finite");
  }
  return MarginSpec(Frechet{alpha, scale});
}

MarginSpec MarginSpec::tabulated(std::vector<double> knots, std::vector<double> density) {
  return MarginSpec(Tabulated(std::move(knots), std::move(density)));
}

double MarginSpec::log_cdf(double z) const noexcept {
  return std::visit(overloaded{[z](const Frechet& f) {
                                 if (!(z > 0.0)) return kNegInf;
                                 return -std::pow(f.scale / z, f.alpha);
                               },
                               [z](const Tabulated& t) { return std::log(t.cdf(z)); }},
                    law_);
}

double MarginSpec::cdf(double z) const noexcept {
  return std::visit(overloaded{[this, z](const Frechet&) { return std::exp(log_cdf(z)); },
                               [z](const Tabulated& t) { return t.cdf(z); }},
                    law_);
}

double MarginSpec::log_density(double z) const noexcept {
  return std::visit(overloaded{[z](const Frechet& f) {
                                 if (!(z > 0.0) || std::isinf(z)) return kNegInf;
                                 const double r = std::pow(f.scale / z, f.alpha);
                                 return std::log(f.alpha) - std::log(z) + std::log(r) - r;
                               },
                               [z](const Tabulated& t) { return std::log(t.density(z)); }},
                    law_);
}

double MarginSpec::density(double z) const noexcept {
  return std::visit(overloaded{[this, z](const Frechet&) { return std::exp(log_density(z)); },
                               [z](const Tabulated& t) { return t.density(z); }},
                    law_);
}

double MarginSpec::log_hazard_ratio(double z) const noexcept {
  return std::visit(overloaded{[z](const Frechet& f) {
                                 // z f(z) / F(z) = alpha (sigma/z)^alpha
                                 if (!(z > 0.0) || std::isinf(z)) return kNegInf;
                                 return std::log(f.alpha) + f.alpha * std::log(f.scale / z);
                               },
                               [z](const Tabulated& t) {
                                 return std::log(z) + std::log(t.density(z)) - std::log(t.cdf(z));
                               }},
                    law_);
}

double MarginSpec::quantile_from_log(double log_u) const noexcept {
  return std::visit(overloaded{[log_u](const Frechet& f) {
                                 if (log_u >= 0.0) return std::numeric_limits<double>::infinity();
                                 return f.scale * std::pow(-log_u, -1.0 / f.alpha);
                               },
                               [log_u](const Tabulated& t) { return t.quantile(std::exp(log_u)); }},
                    law_);
}

double MarginSpec::quantile(double u) const noexcept {
  if (u <= 0.0) return quantile_from_log(kNegInf);
  return quantile_from_log(std::log(u));
}

}  // namespace maxlin
