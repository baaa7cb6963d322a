#include "maxlin/matrix.hpp"

#include "maxlin/error.hpp"

namespace maxlin {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t p = n == 0 ? 0 : rows.front().size();
  Matrix m(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != p) {
      throw Error(Errc::DimensionMismatch, "row " + std::to_string(i) + " has " +
                                               std::to_string(rows[i].size()) +
                                               " entries, expected " + std::to_string(p));
    }
    for (std::size_t j = 0; j < p; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    auto r = row(i);
    out[i].assign(r.begin(), r.end());
  }
  return out;
}

Matrix Matrix::select_columns(std::span<const std::size_t> columns) const {
  Matrix out(rows_, columns.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < columns.size(); ++k) out(i, k) = (*this)(i, columns[k]);
  }
  return out;
}

}  // namespace maxlin
