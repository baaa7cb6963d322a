#pragma once

#include <span>
#include <vector>

#include "maxlin/matrix.hpp"

namespace maxlin {

// Lower-nearest order statistic: sorted[ceil(level * n) - 1], clamped to the sample.
double quantile_type1(std::span<const double> sorted, double level);

struct ColumnSummary {
  double mean = 0.0;
  double median = 0.0;
  std::vector<double> quantiles;  // aligned with SummaryTable::levels
  double exceedance = 0.0;        // fraction of samples above the threshold, if one was given
};

struct SummaryTable {
  std::vector<double> levels;
  std::vector<ColumnSummary> columns;
};

// One summary per column of `samples` (one draw per row). Levels must be strictly
// increasing inside (0, 1); thresholds, when nonempty, give one value per column.
SummaryTable summarize(const Matrix& samples, std::span<const double> levels,
                       std::span<const double> thresholds = {});

// Kolmogorov-Smirnov distances.
template <class Cdf>
double ks_one_sample(std::vector<double> sample, Cdf cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace maxlin

#include <algorithm>
#include <cmath>

template <class Cdf>
double maxlin::ks_one_sample(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double f = cdf(sample[k]);
    d = std::max({d, std::abs(static_cast<double>(k + 1) / n - f), std::abs(f - static_cast<double>(k) / n)});
  }
  return d;
}
