#include "maxlin/summary.hpp"

#include <algorithm>
#include <cmath>

#include "maxlin/error.hpp"

namespace maxlin {

double quantile_type1(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw Error(Errc::InvalidSpec, "quantile of an empty sample");
  const double n = static_cast<double>(sorted.size());
  auto k = static_cast<std::size_t>(std::ceil(level * n));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

SummaryTable summarize(const Matrix& samples, std::span<const double> levels,
                       std::span<const double> thresholds) {
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(levels[k] > 0.0 && levels[k] < 1.0) || (k > 0 && !(levels[k] > levels[k - 1]))) {
      throw Error(Errc::InvalidSpec, "quantile levels must be strictly increasing in (0, 1)");
    }
  }
  if (!thresholds.empty() && thresholds.size() != samples.cols()) {
    throw Error(Errc::DimensionMismatch, "one threshold per column expected");
  }
  if (samples.rows() == 0) throw Error(Errc::InvalidSpec, "no samples to summarize");
  SummaryTable table;
  table.levels.assign(levels.begin(), levels.end());
  table.columns.resize(samples.cols());
  std::vector<double> col(samples.rows());
  for (std::size_t j = 0; j < samples.cols(); ++j) {
    double sum = 0.0;
    std::size_t above = 0;
    for (std::size_t s = 0; s < samples.rows(); ++s) {
      col[s] = samples(s, j);
      sum += col[s];
      if (!thresholds.empty() && col[s] > thresholds[j]) ++above;
    }
    std::sort(col.begin(), col.end());
    auto& c = table.columns[j];
    c.mean = sum / static_cast<double>(col.size());
    c.median = quantile_type1(col, 0.5);
    for (double level : levels) c.quantiles.push_back(quantile_type1(col, level));
    c.exceedance = static_cast<double>(above) / static_cast<double>(col.size());
  }
  return table;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace maxlin
