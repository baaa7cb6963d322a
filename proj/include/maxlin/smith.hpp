#pragma once

#include <array>
#include <vector>

#include "maxlin/matrix.hpp"

namespace maxlin {

using Site = std::array<double, 2>;

// Moving-maxima field with a bivariate Gaussian kernel, discretized on the
// (2q) x (2q) mesh of [-M, M]^2 with cell size h = M / q.
struct SmithSpec {
  double rho = 0.0;
  double beta1 = 1.0;
  double beta2 = 1.0;
  double half_width = 4.0;  // M
  std::size_t q = 25;
  double alpha = 1.0;
  std::vector<Site> observed_sites;
  std::vector<Site> prediction_sites;
  double floor_rel = 1e-12;  // entries below floor_rel * largest entry are zeroed

  double mesh() const noexcept { return half_width / static_cast<double>(q); }
  std::size_t cells() const noexcept { return 4 * q * q; }
  void validate() const;  // throws InvalidSpec
};

double smith_kernel(double t1, double t2, double rho, double beta1, double beta2) noexcept;

struct SmithDesign {
  Matrix observed;   // n x kept
  Matrix predicted;  // m x kept
  // kept_cells[c] is the flat mesh index (j1 + q) * 2q + (j2 + q) of column c.
  std::vector<std::size_t> kept_cells;
  std::size_t total_cells = 0;
  double dropped_mass = 0.0;  // sum of entry^alpha over zeroed entries
};

// Entry for site t and cell (j1, j2): h^(2/alpha) phi(t - u) with u the cell center.
// Throws AssumptionAViolation if an observed site loses every entry to the floor.
SmithDesign smith_design(const SmithSpec& spec);

// k x k sites on [lo, hi]^2, endpoints included, first coordinate varying slowest.
std::vector<Site> uniform_grid(double lo, double hi, std::size_t k);

}  // namespace maxlin
