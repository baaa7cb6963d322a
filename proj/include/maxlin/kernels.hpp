#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference and an
// OpenMP version; the two must agree bit for bit (tests/test_kernels.cpp).

#include <cstdint>
#include <span>
#include <vector>

#include "maxlin/matrix.hpp"

namespace maxlin {
class HitMatrix;
}

namespace maxlin::kernels {

namespace serial {

std::vector<double> upper_bounds(const Matrix& a, std::span<const double> x);
// Rows with no hit are reported through the return value (first such row, or npos).
std::size_t hitting_matrix(const Matrix& a, std::span<const double> x,
                           std::span<const double> z_hat, double rel_tol, HitMatrix& out);
// out(s, i) = max_j b(i, j) * z(s, j); z holds one sample per row.
void max_times_batch(const Matrix& b, const Matrix& z, Matrix& out);

}  // namespace serial

namespace omp {

std::vector<double> upper_bounds(const Matrix& a, std::span<const double> x);
std::size_t hitting_matrix(const Matrix& a, std::span<const double> x,
                           std::span<const double> z_hat, double rel_tol, HitMatrix& out);
void max_times_batch(const Matrix& b, const Matrix& z, Matrix& out);

}  // namespace omp

int max_threads() noexcept;

}  // namespace maxlin::kernels
