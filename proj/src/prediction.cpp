#include "maxlin/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "maxlin/error.hpp"
#include "maxlin/kernels.hpp"

namespace maxlin {
namespace {

struct Split {
  std::vector<std::size_t> constrained;
  std::vector<std::size_t> free;
};

Split split_columns(const Matrix& a) {
  Split s;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    bool any = false;
    for (std::size_t i = 0; i < a.rows() && !any; ++i) any = a(i, j) > 0.0;
    (any ? s.constrained : s.free).push_back(j);
  }
  return s;
}

std::vector<MarginSpec> pick_margins(const std::vector<MarginSpec>& margins,
                                     const std::vector<std::size_t>& columns) {
  std::vector<MarginSpec> out;
  out.reserve(columns.size());
  for (std::size_t j : columns) out.push_back(margins.at(j));
  return out;
}

MaxLinearModel constrained_model(const Matrix& a, const std::vector<MarginSpec>& margins,
                                 const std::vector<std::size_t>& constrained) {
  if (margins.size() != a.cols()) {
    throw Error(Errc::MarginCountMismatch, std::to_string(margins.size()) + " margins for " +
                                               std::to_string(a.cols()) + " columns");
  }
  return validate_model(a.select_columns(constrained), pick_margins(margins, constrained));
}

}  // namespace

PredictionTask::PredictionTask(Matrix a, Matrix b, std::vector<MarginSpec> margins,
                               std::vector<double> x, double rel_tol)
    : a_(std::move(a)),
      b_(std::move(b)),
      margins_(std::move(margins)),
      x_(std::move(x)),
      constrained_(split_columns(a_).constrained),
      free_(split_columns(a_).free),
      model_(constrained_model(a_, margins_, constrained_)),
      law_(build_conditional_law(model_, x_, rel_tol)) {
  if (b_.cols() != a_.cols()) {
    throw Error(Errc::DimensionMismatch, "prediction matrix has " + std::to_string(b_.cols()) +
                                             " columns, observation matrix " +
                                             std::to_string(a_.cols()));
  }
  for (double v : b_.data()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(Errc::NegativeEntry, "prediction matrix entries must be finite and >= 0");
    }
  }
}

ConditionalSample PredictionTask::draw(RngStream& rng) const {
  ConditionalSample inner = draw_conditional(law_, rng);
  ConditionalSample out;
  out.z.assign(p(), 0.0);
  for (std::size_t k = 0; k < constrained_.size(); ++k) out.z[constrained_[k]] = inner.z[k];
  for (std::size_t j : free_) {
    out.z[j] = truncated_draw(margins_[j], std::numeric_limits<double>::infinity(), rng);
  }
  out.chosen.reserve(inner.chosen.size());
  for (std::size_t c : inner.chosen) out.chosen.push_back(constrained_[c]);
  return out;
}

Matrix PredictionTask::sample_factors(std::size_t count, std::uint64_t seed) const {
  Matrix out(count, p());
  const auto n = static_cast<std::int64_t>(count);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      RngStream rng(seed, static_cast<std::uint64_t>(k));
      const auto sample = draw(rng);
      std::copy(sample.z.begin(), sample.z.end(), out.row(static_cast<std::size_t>(k)).begin());
    } catch (...) {
#pragma omp critical(maxlin_prediction_batch)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

Matrix PredictionTask::sample_factors_serial(std::size_t count, std::uint64_t seed) const {
  Matrix out(count, p());
  for (std::size_t k = 0; k < count; ++k) {
    RngStream rng(seed, k);
    const auto sample = draw(rng);
    std::copy(sample.z.begin(), sample.z.end(), out.row(k).begin());
  }
  return out;
}

Matrix PredictionTask::predict(const Matrix& factors) const {
  if (factors.cols() != p()) throw Error(Errc::DimensionMismatch, "factor matrix width");
  Matrix y;
  kernels::omp::max_times_batch(b_, factors, y);
  return y;
}

std::vector<double> PredictionTask::lower_endpoints() const {
  const auto& d = law_.structure().classes;
  const auto& z_hat = law_.z_hat();
  std::vector<double> out(b_.rows(), 0.0);
  for (std::size_t i = 0; i < b_.rows(); ++i) {
    double lo = 0.0;
    for (std::size_t s = 0; s < d.rank(); ++s) {
      double best = std::numeric_limits<double>::infinity();
      const auto& hitting = d.hitting[s];
      for (std::size_t k = 0; k < hitting.size(); ++k) {
        if (law_.weights()[s].probabilities[k] <= 0.0) continue;
        best = std::min(best, b_(i, constrained_[hitting[k]]) * z_hat[hitting[k]]);
      }
      if (std::isfinite(best)) lo = std::max(lo, best);
    }
    out[i] = lo;
  }
  return out;
}

}  // namespace maxlin
