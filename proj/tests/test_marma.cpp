#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "maxlin/marma.hpp"
#include "maxlin/model.hpp"
#include "maxlin/rng.hpp"

using namespace maxlin;

namespace {
const std::vector<double> kMar3{0.7, 0.5, 0.3};
const std::vector<double> kNone{};
}  // namespace

TEST_CASE("coefficients of the MAR(3) example") {
  const auto psi = marma_coefficients(kMar3, kNone, 500);
  REQUIRE(psi.size() == 501);
  const std::vector<double> head{1, 0.7, 0.5, 0.35, 0.25, 0.175};
  for (std::size_t j = 0; j < head.size(); ++j) CHECK(psi[j] == doctest::Approx(head[j]).epsilon(1e-15));
  // alpha_j <= (phi*)^ceil(j/m)
  for (std::size_t j = 0; j < psi.size(); ++j) {
    REQUIRE(psi[j] <= std::pow(0.7, std::ceil(static_cast<double>(j) / 3.0)) * (1 + 1e-14));
  }
  const double total = std::accumulate(psi.begin(), psi.end(), 0.0);
  CHECK(total == doctest::Approx(3.4).epsilon(1e-9));
  CHECK(total / -std::log(0.95) == doctest::Approx(66.2855).epsilon(1e-5));
}

TEST_CASE("coefficients: geometric and moving-average cases") {
  const std::vector<double> half{0.5};
  const auto psi = marma_coefficients(half, kNone, 30);
  for (std::size_t j = 0; j <= 30; ++j) CHECK(psi[j] == std::ldexp(1.0, -static_cast<int>(j)));

  // psi_j = max(alpha_j, theta_1 alpha_{j-1}, theta_2 alpha_{j-2})
  const std::vector<double> phi{0.6};
  const std::vector<double> theta{0.8, 0.3};
  const auto ma = marma_coefficients(phi, theta, 5);
  CHECK(ma[0] == doctest::Approx(1.0));
  CHECK(ma[1] == doctest::Approx(0.8));
  CHECK(ma[2] == doctest::Approx(0.48));
  CHECK(ma[3] == doctest::Approx(0.288));

  const std::vector<double> zero{0.0};
  const auto only_ma = marma_coefficients(zero, theta, 4);
  CHECK(only_ma == std::vector<double>{1, 0.8, 0.3, 0, 0});

  const std::vector<double> unit{1.0};
  CHECK(test::error_code([&] { marma_coefficients(unit, kNone, 5); }) == Errc::NonStationary);
  const std::vector<double> negative{-0.1};
  CHECK(test::error_code([&] { marma_coefficients(negative, kNone, 5); }) == Errc::InvalidSpec);
}

TEST_CASE("truncation quality") {
  const std::vector<double> half{0.5};
  const auto psi = marma_coefficients(half, kNone, 20);
  // head 2 - 2^-20, tail majorant 2^-20
  CHECK(1.0 - marma_truncation_quality(psi, half, kNone) ==
        doctest::Approx(std::ldexp(1.0, -21)).epsilon(1e-6));

  double last = 0.0;
  for (std::size_t p : {2, 5, 10, 20, 40}) {
    const double q = marma_truncation_quality(marma_coefficients(half, kNone, p), half, kNone);
    CHECK(q > last);
    CHECK(q < 1.0 + 1e-15);
    last = q;
  }
  CHECK(marma_truncation_quality(marma_coefficients(kMar3, kNone, 500), kMar3, kNone) > 1.0 - 1e-12);

  // the majorant never undercuts the exact tail
  const auto long_psi = marma_coefficients(kMar3, kNone, 2000);
  const std::span<const double> head(long_psi.data(), 31);
  const double exact_tail = std::accumulate(long_psi.begin() + 31, long_psi.end(), 0.0);
  const double exact = 1.0 - exact_tail / std::accumulate(long_psi.begin(), long_psi.end(), 0.0);
  CHECK(marma_truncation_quality(head, kMar3, kNone) <= exact);
}

TEST_CASE("design layout") {
  const std::vector<double> psi{1.0, 0.5};
  const auto d = marma_design(psi, 1, 1);
  CHECK(d.observed == Matrix::from_rows({{0.5, 1.0, 0.0}}));
  CHECK(d.predicted == Matrix::from_rows({{0.0, 0.5, 1.0}}));

  const auto band = marma_design(marma_coefficients(kMar3, kNone, 30), 20, 7);
  CHECK(band.observed.rows() == 20);
  CHECK(band.observed.cols() == 57);
  CHECK(band.predicted.rows() == 7);
  for (const Matrix* m : {&band.observed, &band.predicted}) {
    for (std::size_t i = 0; i < m->rows(); ++i) {
      const auto r = m->row(i);
      CHECK(std::count_if(r.begin(), r.end(), [](double v) { return v > 0.0; }) == 31);
    }
  }
  CHECK(test::error_code([] {
          std::vector<double> huge(10, 0.5);
          marma_design(huge, std::size_t{1} << 40, 1);
        }) == Errc::DimensionOverflow);
}

TEST_CASE("simulated paths satisfy the recursion") {
  struct Case {
    std::vector<double> phi, theta;
  };
  for (const Case& c : {Case{kMar3, {}}, Case{{0.6}, {0.8, 0.3}}, Case{{0.2, 0.9}, {0.5}}}) {
    const std::size_t p = 400, n = 60, horizon = 20;
    const auto psi = marma_coefficients(c.phi, c.theta, p);
    const auto d = marma_design(psi, n, horizon);
    RngStream rng(9, 0);
    for (int rep = 0; rep < 20; ++rep) {
      const auto z = draw_unit_frechet(p + n + horizon, rng);
      auto x = max_linear_apply(d.observed, z);
      const auto y = max_linear_apply(d.predicted, z);
      x.insert(x.end(), y.begin(), y.end());
      for (std::size_t t = c.phi.size(); t < x.size(); ++t) {
        double rhs = z[t + p];  // Z_t sits at column t + p
        for (std::size_t i = 1; i <= c.phi.size(); ++i) rhs = std::max(rhs, c.phi[i - 1] * x[t - i]);
        for (std::size_t k = 1; k <= c.theta.size(); ++k) rhs = std::max(rhs, c.theta[k - 1] * z[t + p - k]);
        REQUIRE(std::abs(rhs - x[t]) <= 1e-9 * x[t]);
      }
    }
  }
}

TEST_CASE("projection predictor") {
  const std::vector<double> half{0.5};
  const std::vector<double> obs{3.0, 7.0, 2.0};
  const auto pred = projection_predictor(half, kNone, obs, 4);
  CHECK(pred == std::vector<double>{1, 0.5, 0.25, 0.125});

  const std::vector<double> zeros{0.0, 0.0};
  CHECK(projection_predictor(zeros, kNone, obs, 3) == std::vector<double>{0, 0, 0});

  const auto mar3 = projection_predictor(kMar3, kNone, obs, 30);
  CHECK(mar3[0] == doctest::Approx(std::max({0.7 * 2.0, 0.5 * 7.0, 0.3 * 3.0})));
  const std::vector<double> single{0.9};
  const auto ar1 = projection_predictor(single, kNone, obs, 10);
  for (std::size_t k = 1; k < ar1.size(); ++k) CHECK(ar1[k] <= ar1[k - 1]);

  const std::vector<double> theta{0.4};
  CHECK(test::error_code([&] { projection_predictor(half, theta, obs, 3); }) == Errc::NotPureMar);
}

TEST_CASE("spec validation") {
  MarmaSpec spec{kMar3, {}, 500, 100, 50};
  CHECK_NOTHROW(spec.validate());
  spec.truncation = 2;
  CHECK(test::error_code([&] { spec.validate(); }) == Errc::InvalidSpec);
  spec.truncation = 500;
  spec.horizon = 0;
  CHECK(test::error_code([&] { spec.validate(); }) == Errc::InvalidSpec);
  spec.horizon = 5;
  spec.phi = {1.2};
  CHECK(test::error_code([&] { spec.validate(); }) == Errc::NonStationary);
}

TEST_CASE("unit Frechet innovations") {
  RngStream rng(1, 0);
  const auto z = draw_unit_frechet(50000, rng);
  std::vector<double> s(z);
  std::sort(s.begin(), s.end());
  double d = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double f = oracle::frechet_cdf(s[k]);
    d = std::max({d, std::abs(f - static_cast<double>(k) / s.size()),
                  std::abs(static_cast<double>(k + 1) / s.size() - f)});
  }
  CHECK(d < 0.01);
}
