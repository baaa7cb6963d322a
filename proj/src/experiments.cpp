#include "maxlin/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "maxlin/error.hpp"

namespace maxlin {
namespace {

std::vector<MarginSpec> unit_frechet(std::size_t p) {
  return std::vector<MarginSpec>(p, MarginSpec::frechet(1.0, 1.0));
}

bool leq_slack(double value, double bound, double rel_tol) {
  return value <= bound * (1.0 + rel_tol);
}

struct RepOutcome {
  std::vector<std::uint8_t> covered;
  std::vector<double> width;
  std::vector<double> probability;
  std::vector<std::uint8_t> below_median;
};

}  // namespace

SamplingResult run_sampling(const PredictionTask& task, std::size_t num_samples,
                            std::uint64_t seed, std::span<const double> levels,
                            std::span<const double> thresholds) {
  if (num_samples == 0) throw Error(Errc::InvalidSpec, "num_samples must be >= 1");
  SamplingResult r;
  r.factors = task.sample_factors(num_samples, seed);
  r.predictions = task.predict(r.factors);
  if (r.predictions.cols() > 0) r.summary = summarize(r.predictions, levels, thresholds);
  return r;
}

MarmaExperimentResult marma_experiment(const MarmaExperimentConfig& config) {
  const MarmaSpec& spec = config.spec;
  spec.validate();
  if (config.reps == 0 || config.samples == 0) {
    throw Error(Errc::InvalidSpec, "reps and samples must be >= 1");
  }
  const auto psi = marma_coefficients(spec.phi, spec.theta, spec.truncation);
  const auto design = marma_design(psi, spec.n_observed, spec.horizon);
  const std::size_t cols = design.observed.cols();
  const std::size_t horizon = spec.horizon;
  const bool pure_mar =
      std::none_of(spec.theta.begin(), spec.theta.end(), [](double v) { return v > 0.0; });

  std::vector<RepOutcome> outcomes(config.reps);
  std::optional<Error> failure;
  std::int64_t failed_rep = 0;
  const auto reps = static_cast<std::int64_t>(config.reps);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t rr = 0; rr < reps; ++rr) {
    try {
      const auto rep = static_cast<std::uint64_t>(rr);
      const std::uint64_t rep_seed = RngStream::derive_seed(config.seed, rep);
      RngStream path_rng(rep_seed, std::numeric_limits<std::uint64_t>::max());
      const auto z = draw_unit_frechet(cols, path_rng);
      auto x = max_linear_apply(design.observed, z);
      const auto truth = max_linear_apply(design.predicted, z);
      const auto projection =
          pure_mar ? projection_predictor(spec.phi, spec.theta, x, horizon) : std::vector<double>{};

      PredictionTask task(design.observed, design.predicted, unit_frechet(cols), std::move(x),
                          config.rel_tol);
      const Matrix y = task.predict(task.sample_factors(config.samples, rep_seed));
      const auto lower = task.lower_endpoints();

      RepOutcome& out = outcomes[static_cast<std::size_t>(rr)];
      out.covered.resize(horizon);
      out.width.resize(horizon);
      out.probability.assign(horizon, 0.0);
      out.below_median.assign(horizon, 0);
      std::vector<double> col(config.samples);
      for (std::size_t k = 0; k < horizon; ++k) {
        for (std::size_t s = 0; s < config.samples; ++s) col[s] = y(s, k);
        std::sort(col.begin(), col.end());
        const double upper = quantile_type1(col, config.level);
        out.covered[k] = leq_slack(truth[k], upper, config.rel_tol) ? 1 : 0;
        out.width[k] = upper - lower[k];
        if (pure_mar) {
          const double bound = projection[k] * (1.0 + config.rel_tol);
          const auto below = std::upper_bound(col.begin(), col.end(), bound) - col.begin();
          out.probability[k] = static_cast<double>(below) / static_cast<double>(config.samples);
          out.below_median[k] = leq_slack(projection[k], quantile_type1(col, 0.5), config.rel_tol);
        }
      }
    } catch (const Error& e) {
#pragma omp critical(maxlin_marma_experiment)
      if (!failure || rr < failed_rep) {
        failure = e;
        failed_rep = rr;
      }
    }
  }
  if (failure) {
    throw Error(failure->code(), "repetition " + std::to_string(failed_rep) + ": " + failure->detail());
  }

  MarmaExperimentResult result;
  auto& cov = result.coverage;
  auto& bias = result.bias;
  cov.coverage.assign(horizon, 0.0);
  cov.width.assign(horizon, 0.0);
  bias.probability.assign(horizon, 0.0);
  bias.below_median_rate.assign(horizon, 0.0);
  for (const auto& o : outcomes) {
    for (std::size_t k = 0; k < horizon; ++k) {
      cov.coverage[k] += o.covered[k];
      cov.width[k] += o.width[k];
      bias.probability[k] += o.probability[k];
      bias.below_median_rate[k] += o.below_median[k];
    }
  }
  const double reps_d = static_cast<double>(config.reps);
  for (std::size_t k = 0; k < horizon; ++k) {
    cov.coverage[k] /= reps_d;
    cov.width[k] /= reps_d;
    bias.probability[k] /= reps_d;
    bias.below_median_rate[k] /= reps_d;
  }
  return result;
}

CoverageTable coverage_experiment(const MarmaExperimentConfig& config) {
  return marma_experiment(config).coverage;
}

BiasTable projection_bias_experiment(const MarmaExperimentConfig& config) {
  if (std::any_of(config.spec.theta.begin(), config.spec.theta.end(),
                  [](double v) { return v > 0.0; })) {
    throw Error(Errc::NotPureMar, "projection predictor needs q = 0");
  }
  return marma_experiment(config).bias;
}

MarmaForecast marma_forecast(const MarmaSpec& spec, std::size_t num_samples, std::uint64_t seed,
                             std::span<const double> levels, double rel_tol) {
  spec.validate();
  const auto psi = marma_coefficients(spec.phi, spec.theta, spec.truncation);
  const auto design = marma_design(psi, spec.n_observed, spec.horizon);
  const std::size_t cols = design.observed.cols();
  RngStream path_rng(seed, std::numeric_limits<std::uint64_t>::max());
  const auto z = draw_unit_frechet(cols, path_rng);

  MarmaForecast f;
  f.observed = max_linear_apply(design.observed, z);
  f.truth = max_linear_apply(design.predicted, z);
  if (std::none_of(spec.theta.begin(), spec.theta.end(), [](double v) { return v > 0.0; })) {
    f.projection = projection_predictor(spec.phi, spec.theta, f.observed, spec.horizon);
  }
  PredictionTask task(design.observed, design.predicted, unit_frechet(cols), f.observed, rel_tol);
  f.sampling = run_sampling(task, num_samples, seed, levels);
  return f;
}

SmithForecast smith_forecast(const SmithSpec& spec, std::span<const double> observed_values,
                             std::size_t num_samples, std::uint64_t seed,
                             std::span<const double> levels, double rel_tol) {
  SmithForecast f;
  f.design = smith_design(spec);
  if (observed_values.size() != spec.observed_sites.size()) {
    throw Error(Errc::DimensionMismatch, "one observed value per site expected");
  }
  const std::size_t cols = f.design.observed.cols();
  // The prediction matrix moves into the task; the returned design keeps only A.
  PredictionTask task(f.design.observed, std::move(f.design.predicted),
                      std::vector<MarginSpec>(cols, MarginSpec::frechet(spec.alpha, 1.0)),
                      std::vector<double>(observed_values.begin(), observed_values.end()), rel_tol);
  f.design.predicted = Matrix();
  f.sampling = run_sampling(task, num_samples, seed, levels);
  return f;
}

// ---------------------------------------------------------------------------
// validation suite

namespace {

struct Instance {
  Matrix a;
  std::vector<double> z;
  std::vector<double> x;
};

Instance random_instance(RngStream& rng, std::size_t n, std::size_t p) {
  Instance inst{Matrix(n, p), {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      inst.a(i, j) = rng.uniform() < 0.4 ? 0.0 : rng.uniform();
    }
  }
  // Every row and column needs a positive entry: patch empty ones at random.
  for (std::size_t i = 0; i < n; ++i) {
    auto r = inst.a.row(i);
    if (std::none_of(r.begin(), r.end(), [](double v) { return v > 0.0; })) {
      inst.a(i, rng.next_u64() % p) = rng.uniform();
    }
  }
  for (std::size_t j = 0; j < p; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) any = any || inst.a(i, j) > 0.0;
    if (!any) inst.a(rng.next_u64() % n, j) = rng.uniform();
  }
  inst.z = draw_unit_frechet(p, rng);
  inst.x = max_linear_apply(inst.a, inst.z);
  return inst;
}

std::set<std::vector<std::size_t>> product_scenarios(const Decomposition& d) {
  std::set<std::vector<std::size_t>> out{{}};
  for (const auto& hitting : d.hitting) {
    std::set<std::vector<std::size_t>> next;
    for (const auto& partial : out) {
      for (std::size_t j : hitting) {
        auto v = partial;
        v.push_back(j);
        std::sort(v.begin(), v.end());
        next.insert(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

Matrix example_matrix() { return Matrix::from_rows({{1, 0, 0}, {1, 1, 0}, {1, 1, 1}}); }

CheckResult check_example(const std::string& name, const std::vector<double>& x,
                          const std::vector<std::vector<int>>& expected_h,
                          const std::vector<std::vector<std::size_t>>& expected_scenarios,
                          const ValidationConfig& config) {
  CheckResult c{name, true, ""};
  const auto model = validate_model(example_matrix(), unit_frechet(3));
  const auto law = build_conditional_law(model, x, config.rel_tol);
  if (!(law.structure().hits == HitMatrix::from_rows(expected_h))) {
    c.passed = false;
    c.detail += "hitting matrix differs; ";
  }
  if (enumerate_relevant_scenarios(law.structure().hits) != expected_scenarios) {
    c.passed = false;
    c.detail += "scenario set differs; ";
  }
  const auto& sc = expected_scenarios.front();
  for (std::size_t k = 0; k < 200 && c.passed; ++k) {
    RngStream rng(config.seed, k);
    const auto s = draw_conditional(law, rng);
    for (std::size_t j = 0; j < 3; ++j) {
      const bool pinned = std::find(sc.begin(), sc.end(), j) != sc.end();
      const bool ok = pinned ? s.z[j] == law.z_hat()[j] : (s.z[j] > 0.0 && s.z[j] < law.z_hat()[j]);
      if (!ok) {
        c.passed = false;
        c.detail += "draw " + std::to_string(k) + " breaks the pattern at z" + std::to_string(j + 1);
        break;
      }
    }
  }
  if (c.passed) c.detail = "H, scenarios and 200 draws match";
  return c;
}

}  // namespace

bool ValidationReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string ValidationReport::to_json() const {
  nlohmann::json j;
  j["passed"] = all_passed();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return j.dump(2);
}

ValidationReport validate_suite(const ValidationConfig& config) {
  ValidationReport report;
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      report.checks.push_back(body());
    } catch (const std::exception& e) {
      report.checks.push_back({name, false, std::string("unexpected error: ") + e.what()});
    }
  };

  guarded("triangular-distinct", [&] {
    return check_example("triangular-distinct", {1, 2, 3}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2}},
                         config);
  });
  guarded("triangular-partial-tie", [&] {
    return check_example("triangular-partial-tie", {1, 1, 3}, {{1, 0, 0}, {1, 1, 0}, {0, 0, 1}}, {{0, 2}},
                         config);
  });
  guarded("triangular-full-tie", [&] {
    return check_example("triangular-full-tie", {1, 1, 1}, {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}}, {{0}},
                         config);
  });

  guarded("factorization", [&] {
    CheckResult c{"factorization", true, ""};
    double worst = 0.0;
    for (std::size_t t = 0; t < config.trials && c.passed; ++t) {
      RngStream rng(RngStream::derive_seed(config.seed, 1), t);
      const auto inst = random_instance(rng, 5, 8);
      const auto model = validate_model(inst.a, unit_frechet(8));
      const auto law = build_conditional_law(model, inst.x, config.rel_tol);
      const auto brute = enumerate_relevant_scenarios(law.structure().hits);
      const auto product = product_scenarios(law.structure().classes);
      if (std::set<std::vector<std::size_t>>(brute.begin(), brute.end()) != product) {
        c.passed = false;
        c.detail = "trial " + std::to_string(t) + ": scenario sets differ";
        break;
      }
      const auto sl = scenario_probabilities(brute, model.margins(), law.z_hat());
      double log_product = 0.0;
      for (const auto& w : law.weights()) log_product += w.log_total();
      const double rel = std::abs(std::expm1(log_sum_exp(sl.log_weights) - log_product));
      worst = std::max(worst, rel);
      if (rel > 1e-10) {
        c.passed = false;
        c.detail = "trial " + std::to_string(t) + ": relative gap " + std::to_string(rel);
      }
    }
    if (c.passed) {
      std::ostringstream os;
      os << config.trials << " trials, worst relative gap " << worst;
      c.detail = os.str();
    }
    return c;
  });

  guarded("invariants", [&] {
    CheckResult c{"invariants", true, ""};
    for (std::size_t t = 0; t < config.trials && c.passed; ++t) {
      RngStream rng(RngStream::derive_seed(config.seed, 2), t);
      const std::size_t n = 1 + rng.next_u64() % 6;
      const std::size_t p = 1 + rng.next_u64() % 10;
      const auto inst = random_instance(rng, n, p);
      const auto model = validate_model(inst.a, unit_frechet(p));
      const auto law = build_conditional_law(model, inst.x, config.rel_tol);
      const auto& hs = law.structure();
      const auto back = max_linear_apply(inst.a, hs.z_hat);
      for (std::size_t i = 0; i < n; ++i) {
        if (!close_rel(back[i], inst.x[i], config.rel_tol)) c.passed = false;
      }
      for (std::size_t j = 0; j < p; ++j) {
        if (inst.z[j] > hs.z_hat[j] * (1.0 + config.rel_tol)) c.passed = false;
        for (std::size_t i = 0; i < n; ++i) {
          if (hs.hits(i, j) && hs.classes.row_class[i] != hs.classes.column_class[j]) {
            c.passed = false;
          }
        }
      }
      std::vector<double> scaled(inst.x);
      for (double& v : scaled) v *= 3.5;
      if (!(analyze(model, scaled, config.rel_tol).hits == hs.hits)) c.passed = false;
      for (std::size_t k = 0; k < 10 && c.passed; ++k) {
        RngStream srng(config.seed, t * 10 + k);
        const auto s = draw_conditional(law, srng);
        const auto ax = max_linear_apply(inst.a, s.z);
        for (std::size_t i = 0; i < n; ++i) {
          if (!close_rel(ax[i], inst.x[i], config.rel_tol)) c.passed = false;
        }
      }
      if (!c.passed) c.detail = "trial " + std::to_string(t) + " violates an invariant";
    }
    if (c.passed) c.detail = std::to_string(config.trials) + " random instances";
    return c;
  });

  guarded("rejection-oracle", [&] {
    CheckResult c{"rejection-oracle", true, ""};
    const auto model = validate_model(example_matrix(), unit_frechet(3));
    const std::vector<double> x{1, 1, 3};
    RngStream rng(RngStream::derive_seed(config.seed, 3), 0);
    const auto oracle = rejection_oracle(model, x, config.epsilon, config.accepted, rng);
    std::vector<double> z2;
    for (const auto& z : oracle.accepted) z2.push_back(z[1]);
    // Z_2 | Z_2 < 1 for unit Frechet: exp(1 - 1/z) on (0, 1)
    const double d = ks_one_sample(z2, [](double z) {
      return z >= 1.0 ? 1.0 : std::exp(1.0 - 1.0 / z);
    });
    // 0.05, or the 1% critical value when there are too few acceptances for that
    const double limit = std::max(0.05, 1.63 / std::sqrt(static_cast<double>(z2.size())));
    c.passed = d < limit;
    std::ostringstream os;
    os << "KS(z2) = " << d << " (limit " << limit << ") over " << z2.size()
       << " acceptances, rate " << oracle.acceptance_rate();
    c.detail = os.str();
    return c;
  });

  guarded("inconsistent-observation", [&] {
    CheckResult c{"inconsistent-observation", false, "no error raised"};
    const auto model = validate_model(example_matrix(), unit_frechet(3));
    try {
      (void)analyze(model, std::vector<double>{1, 2, 1.5}, config.rel_tol);
    } catch (const Error& e) {
      c.passed = e.code() == Errc::InconsistentObservation;
      c.detail = e.what();
    }
    return c;
  });

  return report;
}

// ---------------------------------------------------------------------------
// benchmark

std::vector<BenchCell> bench_decomposition(const BenchConfig& config) {
  std::vector<BenchCell> out;
  for (std::size_t p : config.ps) {
    const auto q = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(p) / 4.0)));
    if (4 * q * q != p) {
      throw Error(Errc::InvalidSpec, "p = " + std::to_string(p) + " is not (2q)^2");
    }
    for (std::size_t n : config.ns) {
      RngStream rng(RngStream::derive_seed(config.seed, n * 1'000'003 + p), 0);
      SmithSpec spec;
      spec.q = q;
      spec.floor_rel = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        spec.observed_sites.push_back({4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0});
      }
      auto design = smith_design(spec);
      const auto model = validate_model(std::move(design.observed), unit_frechet(p));
      std::vector<double> times;
      times.reserve(config.draws);
      for (std::size_t k = 0; k < config.draws; ++k) {
        const auto z = draw_unit_frechet(p, rng);
        const auto x = max_linear_apply(model.coefficients(), z);
        const auto t0 = std::chrono::steady_clock::now();
        const auto hs = analyze(model, x, config.rel_tol);
        const auto t1 = std::chrono::steady_clock::now();
        if (hs.rank() == 0) throw Error(Errc::InvalidSpec, "empty decomposition");
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
      }
      const double mean = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
      double var = 0.0;
      for (double t : times) var += (t - mean) * (t - mean);
      const double sd = times.size() > 1 ? std::sqrt(var / static_cast<double>(times.size() - 1)) : 0.0;
      out.push_back({n, p, mean, sd});
    }
  }
  return out;
}

}  // namespace maxlin
