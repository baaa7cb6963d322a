#include "maxlin/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxlin/hitting.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace maxlin::kernels {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNoRow = static_cast<std::size_t>(-1);
constexpr std::size_t kColumnBlock = 512;

inline bool is_hit(double a, double z_hat, double x, double rel_tol) noexcept {
  return a > 0.0 && std::abs(a * z_hat - x) <= rel_tol * x;
}

inline double row_max_times(std::span<const double> b_row, std::span<const double> z) noexcept {
  double m = 0.0;
  for (std::size_t j = 0; j < b_row.size(); ++j) m = std::max(m, b_row[j] * z[j]);
  return m;
}

}  // namespace

namespace serial {

std::vector<double> upper_bounds(const Matrix& a, std::span<const double> x) {
  std::vector<double> z_hat(a.cols(), kInf);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (a(i, j) > 0.0) z_hat[j] = std::min(z_hat[j], x[i] / a(i, j));
    }
  }
  return z_hat;
}

std::size_t hitting_matrix(const Matrix& a, std::span<const double> x,
                           std::span<const double> z_hat, double rel_tol, HitMatrix& out) {
  out = HitMatrix(a.rows(), a.cols());
  std::size_t missing = kNoRow;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    bool any = false;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const bool h = is_hit(a(i, j), z_hat[j], x[i], rel_tol);
      out.set(i, j, h);
      any = any || h;
    }
    if (!any && missing == kNoRow) missing = i;
  }
  return missing;
}

void max_times_batch(const Matrix& b, const Matrix& z, Matrix& out) {
  out = Matrix(z.rows(), b.rows());
  for (std::size_t s = 0; s < z.rows(); ++s) {
    for (std::size_t i = 0; i < b.rows(); ++i) out(s, i) = row_max_times(b.row(i), z.row(s));
  }
}

}  // namespace serial

namespace omp {

std::vector<double> upper_bounds(const Matrix& a, std::span<const double> x) {
  std::vector<double> z_hat(a.cols(), kInf);
  const std::size_t n = a.rows();
  const std::size_t p = a.cols();
  const auto blocks = static_cast<std::int64_t>((p + kColumnBlock - 1) / kColumnBlock);
  // Column blocks are disjoint, rows are streamed in storage order within a block.
#pragma omp parallel for schedule(static)
  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    const std::size_t j0 = static_cast<std::size_t>(blk) * kColumnBlock;
    const std::size_t j1 = std::min(p, j0 + kColumnBlock);
    double* zh = z_hat.data();
    for (std::size_t i = 0; i < n; ++i) {
      const double* ai = a.row(i).data();
      const double xi = x[i];
      for (std::size_t j = j0; j < j1; ++j) {
        if (ai[j] > 0.0) zh[j] = std::min(zh[j], xi / ai[j]);
      }
    }
  }
  return z_hat;
}

std::size_t hitting_matrix(const Matrix& a, std::span<const double> x,
                           std::span<const double> z_hat, double rel_tol, HitMatrix& out) {
  out = HitMatrix(a.rows(), a.cols());
  const auto n = static_cast<std::int64_t>(a.rows());
  std::vector<std::uint8_t> row_hit(a.rows(), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double* ai = a.row(i).data();
    auto hi = out.row(i);
    std::uint8_t any = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const std::uint8_t h = is_hit(ai[j], z_hat[j], x[i], rel_tol) ? 1 : 0;
      hi[j] = h;
      any |= h;
    }
    row_hit[i] = any;
  }
  const auto it = std::find(row_hit.begin(), row_hit.end(), std::uint8_t{0});
  return it == row_hit.end() ? kNoRow : static_cast<std::size_t>(it - row_hit.begin());
}

void max_times_batch(const Matrix& b, const Matrix& z, Matrix& out) {
  out = Matrix(z.rows(), b.rows());
  const auto samples = static_cast<std::int64_t>(z.rows());
#pragma omp parallel for schedule(static)
  for (std::int64_t ss = 0; ss < samples; ++ss) {
    const auto s = static_cast<std::size_t>(ss);
    for (std::size_t i = 0; i < b.rows(); ++i) out(s, i) = row_max_times(b.row(i), z.row(s));
  }
}

}  // namespace omp

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace maxlin::kernels
