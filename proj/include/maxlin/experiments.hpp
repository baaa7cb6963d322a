#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxlin/marma.hpp"
#include "maxlin/prediction.hpp"
#include "maxlin/smith.hpp"
#include "maxlin/summary.hpp"

namespace maxlin {

struct SamplingResult {
  Matrix factors;      // num x p
  Matrix predictions;  // num x m
  SummaryTable summary;
};

SamplingResult run_sampling(const PredictionTask& task, std::size_t num_samples,
                            std::uint64_t seed, std::span<const double> levels,
                            std::span<const double> thresholds = {});

struct MarmaExperimentConfig {
  MarmaSpec spec;
  std::size_t reps = 200;
  std::size_t samples = 500;
  std::uint64_t seed = 1;
  double level = 0.95;
  double rel_tol = kDefaultRelTol;
};

// Per-lag averages over repetitions; index k is lag k + 1.
struct CoverageTable {
  std::vector<double> coverage;  // fraction of reps with truth <= conditional upper quantile
  std::vector<double> width;     // mean of (upper quantile - lower endpoint of the support)
};

struct BiasTable {
  std::vector<double> probability;         // mean P(X_s <= projection | past)
  std::vector<double> below_median_rate;   // fraction of reps with projection <= median
};

struct MarmaExperimentResult {
  CoverageTable coverage;
  BiasTable bias;
};

// Simulates reps independent paths, conditions each on its first n values and
// records coverage, widths and projection-predictor probabilities per lag.
// Comparisons against atoms use a relative slack of rel_tol.
MarmaExperimentResult marma_experiment(const MarmaExperimentConfig& config);
CoverageTable coverage_experiment(const MarmaExperimentConfig& config);
BiasTable projection_bias_experiment(const MarmaExperimentConfig& config);

// One simulated path and its conditional forecast.
struct MarmaForecast {
  std::vector<double> observed;
  std::vector<double> truth;
  std::vector<double> projection;  // empty when q > 0
  SamplingResult sampling;
};

MarmaForecast marma_forecast(const MarmaSpec& spec, std::size_t num_samples, std::uint64_t seed,
                             std::span<const double> levels, double rel_tol = kDefaultRelTol);

struct SmithForecast {
  SmithDesign design;
  SamplingResult sampling;
};

SmithForecast smith_forecast(const SmithSpec& spec, std::span<const double> observed_values,
                             std::size_t num_samples, std::uint64_t seed,
                             std::span<const double> levels, double rel_tol = kDefaultRelTol);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  double epsilon = 0.01;
  std::size_t accepted = 2000;
  double rel_tol = kDefaultRelTol;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const noexcept;
  std::string to_json() const;
};

ValidationReport validate_suite(const ValidationConfig& config);

struct BenchConfig {
  std::vector<std::size_t> ns{1, 5, 10, 50};
  std::vector<std::size_t> ps{2500, 10000};
  std::size_t draws = 100;
  std::uint64_t seed = 1;
  double rel_tol = kDefaultRelTol;
};

struct BenchCell {
  std::size_t n = 0;
  std::size_t p = 0;
  double mean_seconds = 0.0;
  double sd_seconds = 0.0;
};

// Times compute_upper_bounds + compute_hitting_matrix + decompose on
// X = A (.) Z for a Smith design with n random sites in [-2, 2]^2 and
// p = (2q)^2 cells (p must be 4 times a square).
std::vector<BenchCell> bench_decomposition(const BenchConfig& config);

}  // namespace maxlin
