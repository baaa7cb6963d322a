#include "maxlin/smith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "maxlin/error.hpp"

namespace maxlin {

void SmithSpec::validate() const {
  if (!(std::abs(rho) < 1.0)) throw Error(Errc::InvalidSpec, "rho must lie in (-1, 1)");
  if (!(beta1 > 0.0) || !(beta2 > 0.0)) throw Error(Errc::InvalidSpec, "betas must be > 0");
  if (!(half_width > 0.0) || q == 0) throw Error(Errc::InvalidSpec, "mesh must be nonempty");
  if (!(alpha > 0.0)) throw Error(Errc::InvalidSpec, "alpha must be > 0");
  if (!(floor_rel >= 0.0) || floor_rel >= 1.0) {
    throw Error(Errc::InvalidSpec, "floor_rel must lie in [0, 1)");
  }
  if (observed_sites.empty()) throw Error(Errc::InvalidSpec, "no observed sites");
}

double smith_kernel(double t1, double t2, double rho, double beta1, double beta2) noexcept {
  const double one_minus = 1.0 - rho * rho;
  const double quad =
      beta1 * beta1 * t1 * t1 - 2.0 * rho * beta1 * beta2 * t1 * t2 + beta2 * beta2 * t2 * t2;
  return beta1 * beta2 / (2.0 * std::numbers::pi * std::sqrt(one_minus)) *
         std::exp(-quad / (2.0 * one_minus));
}

SmithDesign smith_design(const SmithSpec& spec) {
  spec.validate();
  const double h = spec.mesh();
  const auto q = static_cast<long>(spec.q);
  const std::size_t side = 2 * spec.q;
  const std::size_t cells = side * side;
  const double weight = std::pow(h, 2.0 / spec.alpha);

  auto fill = [&](const std::vector<Site>& sites) {
    Matrix m(sites.size(), cells);
    for (std::size_t i = 0; i < sites.size(); ++i) {
      for (long j1 = -q; j1 < q; ++j1) {
        const double u1 = (static_cast<double>(j1) + 0.5) * h;
        for (long j2 = -q; j2 < q; ++j2) {
          const double u2 = (static_cast<double>(j2) + 0.5) * h;
          const auto c = static_cast<std::size_t>(j1 + q) * side + static_cast<std::size_t>(j2 + q);
          m(i, c) = weight * smith_kernel(sites[i][0] - u1, sites[i][1] - u2, spec.rho, spec.beta1,
                                          spec.beta2);
        }
      }
    }
    return m;
  };
  Matrix a = fill(spec.observed_sites);
  Matrix b = fill(spec.prediction_sites);

  double peak = 0.0;
  for (double v : a.data()) peak = std::max(peak, v);
  for (double v : b.data()) peak = std::max(peak, v);
  const double floor = spec.floor_rel * peak;

  SmithDesign d;
  d.total_cells = cells;
  std::vector<bool> keep(cells, false);
  auto clip = [&](Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t c = 0; c < cells; ++c) {
        double& v = m(i, c);
        if (v < floor) {
          d.dropped_mass += std::pow(v, spec.alpha);
          v = 0.0;
        } else {
          keep[c] = true;
        }
      }
    }
  };
  clip(a);
  clip(b);
  for (std::size_t c = 0; c < cells; ++c) {
    if (keep[c]) d.kept_cells.push_back(c);
  }
  if (d.kept_cells.size() == cells) {
    d.observed = std::move(a);
    d.predicted = std::move(b);
  } else {
    d.observed = a.select_columns(d.kept_cells);
    d.predicted = b.select_columns(d.kept_cells);
  }
  for (std::size_t i = 0; i < d.observed.rows(); ++i) {
    auto r = d.observed.row(i);
    if (std::none_of(r.begin(), r.end(), [](double v) { return v > 0.0; })) {
      throw Error(Errc::AssumptionAViolation,
                  "observed site " + std::to_string(i) + " has no entry above the floor");
    }
  }
  return d;
}

std::vector<Site> uniform_grid(double lo, double hi, std::size_t k) {
  std::vector<Site> out;
  out.reserve(k * k);
  const double step = k > 1 ? (hi - lo) / static_cast<double>(k - 1) : 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      out.push_back({lo + step * static_cast<double>(a), lo + step * static_cast<double>(b)});
    }
  }
  return out;
}

}  // namespace maxlin
