#pragma once

#include <span>
#include <vector>

#include "maxlin/matrix.hpp"
#include "maxlin/rng.hpp"

namespace maxlin {

// X_t = phi_1 X_{t-1} v ... v phi_m X_{t-m} v Z_t v theta_1 Z_{t-1} v ... v theta_q Z_{t-q}
// with i.i.d. standard 1-Frechet innovations, truncated to psi_0 .. psi_p.
struct MarmaSpec {
  std::vector<double> phi;
  std::vector<double> theta;
  std::size_t truncation = 500;
  std::size_t n_observed = 100;
  std::size_t horizon = 50;

  // Throws InvalidSpec (negative coefficients, p < m + q, zero sizes) or NonStationary.
  void validate() const;
};

// psi_j = max_{0<=k<=min(j,q)} alpha_{j-k} theta_k, theta_0 = 1,
// alpha_0 = 1, alpha_j = max_i phi_i alpha_{j-i}. Returns psi_0 .. psi_p.
std::vector<double> marma_coefficients(std::span<const double> phi, std::span<const double> theta,
                                       std::size_t p);

// Lower bound on P(truncated X_t == X_t) = 1 - tail / total, with the tail
// sum_{j>p} psi_j replaced by the majorant max(1, theta*) (phi*)^ceil((j-q)/m).
double marma_truncation_quality(std::span<const double> psi, std::span<const double> phi,
                                std::span<const double> theta);

struct MarmaDesign {
  Matrix observed;   // n x (p+n+N)
  Matrix predicted;  // N x (p+n+N)
};

// Banded layout: row t of the stacked (n+N) x (p+n+N) matrix holds psi_{p-k} at
// column t+k. Column c carries Z_{c+1-p}. Throws DimensionOverflow for absurd sizes.
MarmaDesign marma_design(std::span<const double> psi, std::size_t n, std::size_t horizon);

// X_hat_{t+k} = max_i phi_i X_hat_{t+k-i}, seeded with the observed values.
// Throws NotPureMar when theta has a positive entry.
std::vector<double> projection_predictor(std::span<const double> phi,
                                         std::span<const double> theta,
                                         std::span<const double> observed, std::size_t horizon);

// Standard 1-Frechet innovations for a design with `columns` factors.
std::vector<double> draw_unit_frechet(std::size_t columns, RngStream& rng);

}  // namespace maxlin
