#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "maxlin/model.hpp"

namespace maxlin {

inline constexpr double kDefaultRelTol = 1e-9;

// 0/1 matrix: h(i, j) = 1 iff column j attains its upper bound in row i.
class HitMatrix {
 public:
  HitMatrix() = default;
  HitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}
  static HitMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool operator()(std::size_t i, std::size_t j) const noexcept { return bits_[i * cols_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v) noexcept { bits_[i * cols_ + j] = v ? 1 : 0; }
  std::span<const std::uint8_t> row(std::size_t i) const noexcept {
    return {bits_.data() + i * cols_, cols_};
  }
  std::span<std::uint8_t> row(std::size_t i) noexcept { return {bits_.data() + i * cols_, cols_}; }
  std::size_t nnz() const noexcept;

  bool operator==(const HitMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Classes of observation rows linked through shared hitting columns.
// For class s: rows = I_s, hitting = columns that hit every row of I_s,
// touching = columns that hit at least one row of I_s. All index lists ascending.
struct Decomposition {
  std::vector<std::vector<std::size_t>> rows;
  std::vector<std::vector<std::size_t>> hitting;
  std::vector<std::vector<std::size_t>> touching;
  std::vector<std::size_t> row_class;
  std::vector<std::size_t> column_class;

  std::size_t rank() const noexcept { return rows.size(); }
};

struct HittingStructure {
  std::vector<double> z_hat;
  HitMatrix hits;
  Decomposition classes;

  std::size_t rank() const noexcept { return classes.rank(); }
};

// z_hat_j = min over rows with a_ij > 0 of x_i / a_ij.
std::vector<double> compute_upper_bounds(const MaxLinearModel& model, std::span<const double> x);

// h_ij = 1 iff a_ij > 0 and |a_ij z_hat_j - x_i| <= rel_tol * x_i.
// Throws InconsistentObservation when some row is hit by no column.
HitMatrix compute_hitting_matrix(const MaxLinearModel& model, std::span<const double> x,
                                 std::span<const double> z_hat, double rel_tol = kDefaultRelTol);

// Union-find over rows, one pass over H. Throws MalformedHittingMatrix if a row or
// column of H is empty, EmptyScenarioClass if some class has no column hitting all its rows.
Decomposition decompose(const HitMatrix& hits);

// compute_upper_bounds + compute_hitting_matrix + decompose.
HittingStructure analyze(const MaxLinearModel& model, std::span<const double> x,
                         double rel_tol = kDefaultRelTol);

}  // namespace maxlin
