#include "maxlin/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxlin/error.hpp"

namespace maxlin {

MaxLinearModel validate_model(Matrix a, std::vector<MarginSpec> margins) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw Error(Errc::DimensionMismatch, "coefficient matrix is empty");
  }
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw Error(Errc::NonFiniteEntry, "coefficient is not finite");
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) < 0.0) {
        throw Error(Errc::NegativeEntry,
                    "a(" + std::to_string(i) + "," + std::to_string(j) + ") < 0");
      }
    }
  }
  if (margins.size() != a.cols()) {
    throw Error(Errc::MarginCountMismatch, std::to_string(margins.size()) + " margins for " +
                                               std::to_string(a.cols()) + " columns");
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    if (std::none_of(r.begin(), r.end(), [](double v) { return v > 0.0; })) {
      throw Error(Errc::ZeroRow, "row " + std::to_string(i) + " has no positive entry");
    }
  }
  std::vector<bool> seen(a.cols(), false);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) seen[j] = seen[j] || a(i, j) > 0.0;
  }
  if (auto it = std::find(seen.begin(), seen.end(), false); it != seen.end()) {
    throw Error(Errc::ZeroColumn,
                "column " + std::to_string(it - seen.begin()) + " has no positive entry");
  }
  return MaxLinearModel(std::move(a), std::move(margins));
}

std::vector<double> max_linear_apply(const Matrix& a, std::span<const double> z) {
  if (z.size() != a.cols()) {
    throw Error(Errc::DimensionMismatch, "vector of length " + std::to_string(z.size()) +
                                             " against " + std::to_string(a.cols()) + " columns");
  }
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    double m = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) m = std::max(m, r[j] * z[j]);
    out[i] = m;
  }
  return out;
}

void check_observation(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !(x[i] > 0.0)) {
      throw Error(Errc::InvalidObservation,
                  "x[" + std::to_string(i) + "] must be finite and > 0");
    }
  }
}

}  // namespace maxlin
