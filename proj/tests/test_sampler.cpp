#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "maxlin/conditional.hpp"
#include "maxlin/sampler.hpp"
#include "maxlin/summary.hpp"

using namespace maxlin;

namespace {

// E[Z | Z < 1] for a unit Frechet variable, by quadrature.
double truncated_mean_below_one() {
  const double mass = oracle::frechet_cdf(1.0);
  return oracle::simpson([](double z) { return z * oracle::frechet_pdf(z); }, 1e-9, 1.0) / mass;
}

// Label for a set of columns, for chi-square bookkeeping.
int label(std::vector<std::size_t> cols) {
  std::sort(cols.begin(), cols.end());
  int out = 0;
  for (auto j : cols) out |= 1 << j;
  return out;
}

// Random instance plus a rescaled copy of one column, so that the observation
// has a genuine tie inside some class.
struct TiedCase {
  Matrix a;
  std::vector<double> x;
};

TiedCase tied_instance(std::mt19937_64& gen, std::size_t n, std::size_t p) {
  auto inst = oracle::random_instance(gen, n, p, 0.4);
  const std::size_t j = gen() % p;
  const double c = 0.5 + static_cast<double>(gen() % 100) / 50.0;
  for (auto& row : inst.a) row.push_back(c * row[j]);
  inst.z.push_back(inst.z[j] / c);
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k <= p; ++k) x[i] = std::max(x[i], inst.a[i][k] * inst.z[k]);
  }
  return {test::to_matrix(inst.a), x};
}

}  // namespace

TEST_CASE("truncated_draw reproduces the truncated law") {
  const auto fr = MarginSpec::frechet(1.0, 1.0);
  RngStream rng(11, 0);
  std::vector<double> wide, below_one;
  for (int k = 0; k < 100000; ++k) {
    wide.push_back(truncated_draw(fr, 1e12, rng));
    below_one.push_back(truncated_draw(fr, 1.0, rng));
  }
  CHECK(ks_one_sample(wide, [](double z) { return oracle::frechet_cdf(z); }) < 0.01);
  CHECK(ks_one_sample(below_one, [](double z) { return std::exp(1.0 - 1.0 / z); }) < 0.01);
  CHECK(std::all_of(below_one.begin(), below_one.end(), [](double z) { return z < 1.0; }));

  const auto unbounded = truncated_draw(fr, INFINITY, rng);
  CHECK(std::isfinite(unbounded));

  const auto tab = MarginSpec::tabulated({0, 1, 3}, {0.2, 0.4});
  std::vector<double> t;
  for (int k = 0; k < 100000; ++k) t.push_back(truncated_draw(tab, 2.0, rng));
  // F(z) / F(2) with F(2) = 0.6
  CHECK(ks_one_sample(t, [](double z) { return (z < 1 ? 0.2 * z : 0.2 + 0.4 * (z - 1)) / 0.6; }) <
        0.01);
  CHECK(test::error_code([&] { truncated_draw(tab, 0.0, rng); }) == Errc::ZeroMassBelowBound);
}

TEST_CASE("conditional draws on the three worked cases") {
  const auto model = validate_model(test::example_matrix(), test::unit_frechet(3));
  RngStream rng(3, 0);
  SUBCASE("case (i): factors are determined") {
    const auto law = build_conditional_law(model, std::vector<double>{1, 2, 3});
    for (int k = 0; k < 100; ++k) CHECK(draw_conditional(law, rng).z == std::vector<double>{1, 2, 3});
  }
  SUBCASE("case (ii)") {
    const auto law = build_conditional_law(model, std::vector<double>{1, 1, 3});
    for (int k = 0; k < 1000; ++k) {
      const auto s = draw_conditional(law, rng);
      REQUIRE(s.z[0] == 1.0);
      REQUIRE(s.z[1] < 1.0);
      REQUIRE(s.z[2] == 3.0);
      REQUIRE(max_linear_apply(test::example_matrix(), s.z) == std::vector<double>{1, 1, 3});
    }
  }
  SUBCASE("case (iii)") {
    const auto law = build_conditional_law(model, std::vector<double>{1, 1, 1});
    for (int k = 0; k < 1000; ++k) {
      const auto s = draw_conditional(law, rng);
      REQUIRE(s.z[0] == 1.0);
      REQUIRE(s.z[1] < 1.0);
      REQUIRE(s.z[2] < 1.0);
      REQUIRE(s.chosen == std::vector<std::size_t>{0});
    }
  }
}

TEST_CASE("predict") {
  const auto a = test::example_matrix();
  const auto model = validate_model(a, test::unit_frechet(3));
  const auto law = build_conditional_law(model, std::vector<double>{1, 1, 1});
  RngStream rng(8, 0);
  const auto s = draw_conditional(law, rng);
  CHECK(predict(a, s) == std::vector<double>{1, 1, 1});
  CHECK(predict(Matrix(2, 3, 0.0), s) == std::vector<double>{0, 0});

  const auto b = Matrix::from_rows({{0, 1, 0}});
  const auto batch = sample_batch(law, 100000, 21);
  double mean = 0;
  for (std::size_t k = 0; k < batch.rows(); ++k) {
    const ConditionalSample row{{batch.row(k).begin(), batch.row(k).end()}, {}};
    mean += predict(b, row)[0];
  }
  mean /= static_cast<double>(batch.rows());
  const double expected = truncated_mean_below_one();
  CHECK(expected == doctest::Approx(0.5963473623).epsilon(1e-6));
  CHECK(mean == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("hitting column frequencies match the class weights") {
  const auto model = validate_model(Matrix::from_rows({{1, 0.5}}), test::unit_frechet(2));
  const auto law = build_conditional_law(model, std::vector<double>{1.0});
  RngStream rng(4, 0);
  const int draws = 10000;
  int first = 0;
  for (int k = 0; k < draws; ++k) first += draw_conditional(law, rng).chosen[0] == 0;
  const double p = 2.0 / 3.0;
  CHECK(std::abs(first / static_cast<double>(draws) - p) < 4 * std::sqrt(p * (1 - p) / draws));
}

TEST_CASE("batch sampling is deterministic in the seed") {
  const auto model = validate_model(Matrix::from_rows({{1, 1, 0.5}, {0, 1, 1}}), test::unit_frechet(3));
  const auto law = build_conditional_law(model, std::vector<double>{2.0, 2.0});
  const auto a = sample_batch(law, 500, 42);
  const auto b = sample_batch(law, 500, 42);
  const auto c = sample_batch(law, 500, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a == sample_batch_serial(law, 500, 42));
}

TEST_CASE("scenario route and class route agree") {
  std::mt19937_64 gen(314);
  int tested = 0;
  for (int trial = 0; trial < 40 && tested < 8; ++trial) {
    const auto tc = tied_instance(gen, 2 + gen() % 4, 2 + gen() % 5);
    const auto margins = test::unit_frechet(tc.a.cols());
    const auto model = validate_model(tc.a, margins);
    const auto law = build_conditional_law(model, tc.x);
    const auto scen = scenario_probabilities(enumerate_relevant_scenarios(law.structure().hits),
                                             margins, law.z_hat());
    if (scen.scenarios.size() < 2) continue;
    ++tested;
    RngStream r1(tested, 1), r2(tested, 2);
    std::map<int, std::size_t> by_class, by_scenario;
    std::vector<double> z_class, z_scen;
    for (int k = 0; k < 10000; ++k) {
      const auto s1 = draw_conditional(law, r1);
      const auto s2 = draw_by_scenario(scen, r2);
      ++by_class[label(s1.chosen)];
      ++by_scenario[label(s2.chosen)];
      z_class.push_back(s1.z.back());
      z_scen.push_back(s2.z.back());
    }
    CHECK(oracle::chi_square_p_value(by_class, by_scenario) > 0.001);
    // two-sample KS critical value at level 0.001 for 10^4 vs 10^4 is about 0.0276
    CHECK(ks_two_sample(z_class, z_scen) < 0.0276);
  }
  CHECK(tested >= 4);
}

TEST_CASE("designed two-class tie: scenario frequencies") {
  const std::vector<MarginSpec> margins{MarginSpec::frechet(1, 1), MarginSpec::frechet(2, 1),
                                        MarginSpec::frechet(1.5, 2), MarginSpec::frechet(1, 0.5)};
  const auto model = validate_model(Matrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 2}}), margins);
  const auto law = build_conditional_law(model, std::vector<double>{1, 1});
  REQUIRE(law.rank() == 2);
  const auto scen = scenario_probabilities(enumerate_relevant_scenarios(law.structure().hits),
                                           margins, law.z_hat());
  REQUIRE(scen.scenarios.size() == 4);
  RngStream r1(1, 1), r2(1, 2);
  std::map<int, std::size_t> by_class, by_scenario;
  for (int k = 0; k < 10000; ++k) {
    ++by_class[label(draw_conditional(law, r1).chosen)];
    ++by_scenario[label(draw_by_scenario(scen, r2).chosen)];
  }
  CHECK(oracle::chi_square_p_value(by_class, by_scenario) > 0.001);
}

TEST_CASE("rejection oracle") {
  const auto model = validate_model(test::example_matrix(), test::unit_frechet(3));
  const std::vector<double> x{1, 1, 1};
  RngStream rng(17, 0);
  const auto res = rejection_oracle(model, x, 0.01, 2000, rng);
  REQUIRE(res.accepted.size() == 2000);
  std::vector<double> z2;
  for (const auto& z : res.accepted) {
    const auto ax = max_linear_apply(test::example_matrix(), z);
    for (std::size_t i = 0; i < 3; ++i) {
      REQUIRE(std::abs(ax[i] - x[i]) <= 0.01 * x[i]);
    }
    // accepted factors stay below the bounds of the inflated observation
    for (double v : z) REQUIRE(v <= 1.01);
    z2.push_back(z[1]);
  }
  CHECK(ks_one_sample(z2, [](double z) { return std::exp(1.0 - 1.0 / z); }) < 0.05);

  double last = 0;
  for (double eps : {0.005, 0.01, 0.02, 0.04}) {
    RngStream r(5, static_cast<std::uint64_t>(eps * 1000));
    const double rate = rejection_oracle(model, x, eps, 300, r).acceptance_rate();
    CHECK(rate > last);
    last = rate;
  }
  RngStream tight(1, 1);
  CHECK(test::error_code([&] { rejection_oracle(model, x, 1e-6, 10, tight, 10000); }) ==
        Errc::AcceptanceTooRare);
}
