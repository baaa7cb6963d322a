#include "maxlin/marma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "maxlin/error.hpp"

namespace maxlin {
namespace {

double max_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

void check_coefficients(std::span<const double> phi, std::span<const double> theta) {
  for (double v : phi) {
    if (!std::isfinite(v) || v < 0.0) throw Error(Errc::InvalidSpec, "phi must be >= 0");
  }
  for (double v : theta) {
    if (!std::isfinite(v) || v < 0.0) throw Error(Errc::InvalidSpec, "theta must be >= 0");
  }
  if (max_of(phi) >= 1.0) {
    throw Error(Errc::NonStationary, "max phi = " + std::to_string(max_of(phi)) + " >= 1");
  }
}

}  // namespace

void MarmaSpec::validate() const {
  check_coefficients(phi, theta);
  if (truncation < phi.size() + theta.size()) {
    throw Error(Errc::InvalidSpec, "truncation must be at least m + q");
  }
  if (n_observed == 0 || horizon == 0) {
    throw Error(Errc::InvalidSpec, "observed length and horizon must be positive");
  }
}

std::vector<double> marma_coefficients(std::span<const double> phi, std::span<const double> theta,
                                       std::size_t p) {
  check_coefficients(phi, theta);
  std::vector<double> alpha(p + 1, 0.0);
  alpha[0] = 1.0;
  for (std::size_t j = 1; j <= p; ++j) {
    double a = 0.0;
    for (std::size_t i = 1; i <= phi.size() && i <= j; ++i) a = std::max(a, phi[i - 1] * alpha[j - i]);
    alpha[j] = a;
  }
  std::vector<double> psi(p + 1, 0.0);
  for (std::size_t j = 0; j <= p; ++j) {
    double v = alpha[j];  // k = 0 term, theta_0 = 1
    for (std::size_t k = 1; k <= theta.size() && k <= j; ++k) {
      v = std::max(v, alpha[j - k] * theta[k - 1]);
    }
    psi[j] = v;
  }
  return psi;
}

double marma_truncation_quality(std::span<const double> psi, std::span<const double> phi,
                                std::span<const double> theta) {
  check_coefficients(phi, theta);
  if (psi.empty()) throw Error(Errc::InvalidSpec, "empty coefficient vector");
  const std::size_t p = psi.size() - 1;
  const std::size_t q = theta.size();
  if (p < q) throw Error(Errc::InvalidSpec, "truncation shorter than the moving-average order");
  const double rho = max_of(phi);
  if (rho == 0.0) return 1.0;  // psi_j = 0 for j > q

  const std::size_t m = phi.size();
  const double head = std::accumulate(psi.begin(), psi.end(), 0.0);
  // sum_{k >= p+1-q} rho^ceil(k/m): finish the current block term by term, then
  // whole blocks of m equal terms as a geometric series.
  std::size_t k = p + 1 - q;
  double tail = 0.0;
  while (k % m != 0) {
    tail += std::pow(rho, static_cast<double>((k + m - 1) / m));
    ++k;
  }
  const double block = static_cast<double>(k / m);
  tail += std::pow(rho, block) + static_cast<double>(m) * std::pow(rho, block + 1.0) / (1.0 - rho);
  tail *= std::max(1.0, max_of(theta));
  return 1.0 - tail / (head + tail);
}

MarmaDesign marma_design(std::span<const double> psi, std::size_t n, std::size_t horizon) {
  if (psi.empty()) throw Error(Errc::InvalidSpec, "empty coefficient vector");
  const std::size_t p = psi.size() - 1;
  constexpr std::size_t kMaxEntries = std::size_t{1} << 31;
  const std::size_t cols = p + n + horizon;
  if (cols < p || (n + horizon) > kMaxEntries / std::max<std::size_t>(cols, 1)) {
    throw Error(Errc::DimensionOverflow, "design of " + std::to_string(n + horizon) + " x " +
                                             std::to_string(cols) + " is too large");
  }
  MarmaDesign d{Matrix(n, cols), Matrix(horizon, cols)};
  for (std::size_t t = 0; t < n + horizon; ++t) {
    Matrix& target = t < n ? d.observed : d.predicted;
    const std::size_t row = t < n ? t : t - n;
    for (std::size_t k = 0; k <= p; ++k) target(row, t + k) = psi[p - k];
  }
  return d;
}

std::vector<double> projection_predictor(std::span<const double> phi,
                                         std::span<const double> theta,
                                         std::span<const double> observed, std::size_t horizon) {
  if (std::any_of(theta.begin(), theta.end(), [](double v) { return v > 0.0; })) {
    throw Error(Errc::NotPureMar, "projection predictor needs q = 0");
  }
  std::vector<double> path(observed.begin(), observed.end());
  path.reserve(observed.size() + horizon);
  for (std::size_t k = 0; k < horizon; ++k) {
    const std::size_t t = path.size();
    double v = 0.0;
    for (std::size_t i = 1; i <= phi.size() && i <= t; ++i) v = std::max(v, phi[i - 1] * path[t - i]);
    path.push_back(v);
  }
  return {path.begin() + static_cast<std::ptrdiff_t>(observed.size()), path.end()};
}

std::vector<double> draw_unit_frechet(std::size_t columns, RngStream& rng) {
  std::vector<double> z(columns);
  for (auto& v : z) v = -1.0 / std::log(rng.uniform());
  return z;
}

}  // namespace maxlin
