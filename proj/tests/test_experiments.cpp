#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "maxlin/experiments.hpp"
#include "maxlin/summary.hpp"

using namespace maxlin;

TEST_CASE("type-1 quantiles") {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(quantile_type1(v, 0.5) == 5);
  CHECK(quantile_type1(v, 0.95) == 10);
  CHECK(quantile_type1(v, 0.1) == 1);
  CHECK(quantile_type1(v, 0.11) == 2);
  CHECK(quantile_type1(v, 1e-9) == 1);

  // fraction at or below the q-quantile is within 1/N of q for continuous data
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(1 + gen() % 500);
    for (double& x : s) x = u(gen);
    std::sort(s.begin(), s.end());
    for (double level : {0.05, 0.5, 0.9, 0.95}) {
      const double qv = quantile_type1(s, level);
      const double frac = static_cast<double>(std::upper_bound(s.begin(), s.end(), qv) - s.begin()) /
                          static_cast<double>(s.size());
      REQUIRE(frac >= level - 1e-12);
      REQUIRE(frac <= level + 1.0 / static_cast<double>(s.size()) + 1e-12);
    }
  }
}

TEST_CASE("summarize") {
  const auto m = Matrix::from_rows({{1, 10}, {2, 20}, {3, 30}, {4, 40}});
  const std::vector<double> levels{0.5, 0.75};
  const std::vector<double> thresholds{2.5, 100};
  const auto t = summarize(m, levels, thresholds);
  REQUIRE(t.columns.size() == 2);
  CHECK(t.columns[0].mean == doctest::Approx(2.5));
  CHECK(t.columns[0].median == 2);
  CHECK(t.columns[0].quantiles == std::vector<double>{2, 3});
  CHECK(t.columns[0].exceedance == 0.5);
  CHECK(t.columns[1].quantiles == std::vector<double>{20, 30});
  CHECK(t.columns[1].exceedance == 0.0);

  const std::vector<double> bad{0.5, 0.5};
  CHECK(test::error_code([&] { summarize(m, bad); }) == Errc::InvalidSpec);
  const std::vector<double> outside{1.0};
  CHECK(test::error_code([&] { summarize(m, outside); }) == Errc::InvalidSpec);
}

TEST_CASE("two-sample KS") {
  CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_two_sample({1, 2}, {3, 4}) == 1.0);
  CHECK(ks_two_sample({1, 1, 2, 2}, {1, 2}) == 0.0);
}

TEST_CASE("prediction task on the worked example") {
  const auto a = test::example_matrix();
  PredictionTask task(a, a, test::unit_frechet(3), {1, 2, 3});
  const std::vector<double> levels{0.5, 0.95};
  const auto r = run_sampling(task, 50, 1, levels);
  for (std::size_t k = 0; k < 50; ++k) {
    REQUIRE(std::vector<double>(r.predictions.row(k).begin(), r.predictions.row(k).end()) ==
            std::vector<double>{1, 2, 3});
  }
  CHECK(r.summary.columns[2].median == 3);
  CHECK(task.lower_endpoints() == std::vector<double>{1, 2, 3});
  CHECK(run_sampling(task, 50, 1, levels).factors == r.factors);
}

TEST_CASE("prediction task draws unconstrained columns unconditionally") {
  // column 2 never appears in A
  const auto a = Matrix::from_rows({{1, 0.5, 0}});
  const auto b = Matrix::from_rows({{0, 0, 1}, {1, 1, 0}});
  PredictionTask task(a, b, test::unit_frechet(3), {2.0});
  CHECK(task.constrained_columns() == std::vector<std::size_t>{0, 1});
  CHECK(task.free_columns() == std::vector<std::size_t>{2});
  const auto f = task.sample_factors(20000, 5);
  CHECK(f == task.sample_factors_serial(20000, 5));
  std::vector<double> free_col;
  for (std::size_t k = 0; k < f.rows(); ++k) {
    REQUIRE(std::max(f(k, 0), 0.5 * f(k, 1)) == doctest::Approx(2.0).epsilon(1e-12));
    free_col.push_back(f(k, 2));
  }
  CHECK(ks_one_sample(free_col, [](double z) { return oracle::frechet_cdf(z); }) < 0.015);
  const auto y = task.predict(f);
  CHECK(y.cols() == 2);
  // Y_2 = max(Z_1, Z_2) is at least min over the tie of b z_hat = min(2, 4)
  CHECK(task.lower_endpoints()[1] == doctest::Approx(2.0));
  CHECK(task.lower_endpoints()[0] == 0.0);

  CHECK(test::error_code([&] {
          PredictionTask(a, Matrix::from_rows({{1, 1}}), test::unit_frechet(3), {2.0});
        }) == Errc::DimensionMismatch);
  CHECK(test::error_code([&] {
          PredictionTask(a, Matrix::from_rows({{1, -1, 0}}), test::unit_frechet(3), {2.0});
        }) == Errc::NegativeEntry);
}

TEST_CASE("MARMA forecast and a small experiment") {
  MarmaSpec spec{{0.7, 0.5, 0.3}, {}, 100, 20, 10};
  const std::vector<double> levels{0.5, 0.95};
  const auto f = marma_forecast(spec, 200, 4, levels);
  CHECK(f.observed.size() == 20);
  CHECK(f.truth.size() == 10);
  CHECK(f.projection.size() == 10);
  CHECK(f.sampling.predictions.rows() == 200);
  CHECK(f.sampling.predictions.cols() == 10);
  // one step ahead is bounded below by the projection
  for (std::size_t k = 0; k < f.sampling.predictions.rows(); ++k) {
    REQUIRE(f.sampling.predictions(k, 0) >= f.projection[0] * (1 - 1e-9));
  }

  MarmaExperimentConfig config;
  config.spec = spec;
  config.reps = 20;
  config.samples = 100;
  const auto r1 = marma_experiment(config);
  const auto r2 = marma_experiment(config);
  CHECK(r1.coverage.coverage == r2.coverage.coverage);
  CHECK(r1.bias.probability == r2.bias.probability);
  REQUIRE(r1.coverage.coverage.size() == 10);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(r1.coverage.coverage[k] >= 0.0);
    CHECK(r1.coverage.coverage[k] <= 1.0);
    CHECK(r1.coverage.width[k] > 0.0);
  }
  // the projection is the lower endpoint one step ahead
  CHECK(r1.bias.below_median_rate[0] == 1.0);

  config.spec.theta = {0.4};
  CHECK(test::error_code([&] { projection_bias_experiment(config); }) == Errc::NotPureMar);
  CHECK(coverage_experiment(config).coverage.size() == 10);
}

TEST_CASE("Smith forecast reproduces the observed sites") {
  SmithSpec spec;
  spec.q = 10;
  spec.observed_sites = {{0.0, 0.0}, {1.0, 1.0}, {-1.5, 0.5}};
  spec.prediction_sites = uniform_grid(-2, 2, 4);
  for (const auto& s : spec.observed_sites) spec.prediction_sites.push_back(s);
  const std::vector<double> values{5, 5, 5};
  const std::vector<double> levels{0.5, 0.95};
  const auto f = smith_forecast(spec, values, 100, 2, levels);
  const auto& y = f.sampling.predictions;
  REQUIRE(y.cols() == 19);
  for (std::size_t k = 0; k < y.rows(); ++k) {
    for (std::size_t c = 16; c < 19; ++c) REQUIRE(y(k, c) == doctest::Approx(5.0).epsilon(1e-9));
  }
  for (const auto& col : f.sampling.summary.columns) {
    CHECK(std::isfinite(col.quantiles[1]));
    CHECK(col.median > 0.0);
  }
  CHECK(test::error_code([&] { smith_forecast(spec, std::vector<double>{5, 5}, 10, 1, levels); }) ==
        Errc::DimensionMismatch);
}

TEST_CASE("validation suite passes and reports JSON") {
  ValidationConfig config;
  config.trials = 30;
  config.accepted = 500;
  config.epsilon = 0.02;
  const auto report = validate_suite(config);
  for (const auto& c : report.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
  const auto j = nlohmann::json::parse(report.to_json());
  CHECK(j["passed"] == true);
  CHECK(j["checks"].size() == report.checks.size());
}

TEST_CASE("decomposition benchmark shape") {
  BenchConfig config;
  config.ns = {1, 3};
  config.ps = {100, 400};
  config.draws = 3;
  const auto cells = bench_decomposition(config);
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].p == 100);
  CHECK(cells[3].n == 3);
  for (const auto& c : cells) CHECK(c.mean_seconds > 0.0);
  config.ps = {101};
  CHECK(test::error_code([&] { bench_decomposition(config); }) == Errc::InvalidSpec);
}
