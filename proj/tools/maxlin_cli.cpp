// Command-line front end: conditional sampling for max-linear models, MARMA and
// Smith forecasts, the self-check suite, timing and structure inspection.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "maxlin/conditional.hpp"
#include "maxlin/error.hpp"
#include "maxlin/experiments.hpp"
#include "maxlin/io.hpp"
#include "maxlin/kernels.hpp"

using json = nlohmann::json;
using namespace maxlin;

namespace {

struct Common {
  std::string model;
  std::string obs;
  std::size_t num = 1000;
  std::uint64_t seed = 1;
  double rel_tol = kDefaultRelTol;
  std::string out;
  std::string report;
  std::vector<double> quantiles{0.5, 0.95};
};

void add_sampling_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--num", c.num, "number of conditional samples")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--rel-tol", c.rel_tol, "relative tolerance for hitting ties")
      ->check(CLI::Range(0.0, 1e-3));
  cmd->add_option("--quantiles", c.quantiles, "comma-separated quantile levels")->delimiter(',');
}

void add_output_flags(CLI::App* cmd, Common& c, const char* what) {
  cmd->add_option("--out", c.out, what);
  cmd->add_option("--report", c.report, "write the JSON report here instead of stdout");
}

void emit_report(const Common& c, const json& report) {
  if (c.report.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream f(c.report);
  if (!f) throw Error(Errc::Io, "cannot write " + c.report);
  f << report.dump(2) << "\n";
}

std::string level_name(double level) {
  std::ostringstream os;
  os << "q" << level;
  return os.str();
}

std::vector<std::string> summary_header(const std::vector<double>& levels) {
  std::vector<std::string> h{"mean", "median"};
  for (double l : levels) h.push_back(level_name(l));
  return h;
}

std::vector<double> summary_row(const ColumnSummary& s) {
  std::vector<double> r{s.mean, s.median};
  r.insert(r.end(), s.quantiles.begin(), s.quantiles.end());
  return r;
}

json summary_json(const SummaryTable& t, const std::string& prefix) {
  json cols = json::array();
  for (std::size_t k = 0; k < t.columns.size(); ++k) {
    json q;
    for (std::size_t l = 0; l < t.levels.size(); ++l) q[level_name(t.levels[l])] = t.columns[k].quantiles[l];
    cols.push_back({{"name", prefix + std::to_string(k + 1)},
                    {"mean", t.columns[k].mean},
                    {"median", t.columns[k].median},
                    {"quantiles", q}});
  }
  return cols;
}

std::vector<std::vector<double>> matrix_rows(const Matrix& m) { return m.to_rows(); }

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 1; k <= n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

// ---------------------------------------------------------------------------

int run_sample(const Common& c) {
  const auto file = io::load_model(c.model);
  const auto x = io::read_observation(c.obs);
  const bool has_b = file.b.has_value();
  const std::size_t p = file.a.cols();
  // Without B the factors themselves are the prediction target.
  Matrix b = has_b ? *file.b : Matrix(p, p, 0.0);
  if (!has_b) {
    for (std::size_t j = 0; j < p; ++j) b(j, j) = 1.0;
  }
  PredictionTask task(file.a, std::move(b), file.margins, x, c.rel_tol);
  const auto r = run_sampling(task, c.num, c.seed, c.quantiles);
  const std::string prefix = has_b ? "y" : "z";

  if (!c.out.empty()) {
    io::write_csv_file(c.out, numbered(prefix, r.predictions.cols()), matrix_rows(r.predictions));
  }
  json report{{"command", "sample"},
              {"samples", c.num},
              {"seed", c.seed},
              {"rank", task.law().rank()},
              {"free_columns", task.free_columns().size()},
              {"summary", summary_json(r.summary, prefix)}};
  emit_report(c, report);
  return 0;
}

int run_inspect(const Common& c) {
  const auto file = io::load_model(c.model);
  const auto x = io::read_observation(c.obs);
  const auto model = validate_model(file.a, file.margins);
  const auto law = build_conditional_law(model, x, c.rel_tol);
  const auto& hs = law.structure();
  json classes = json::array();
  for (std::size_t s = 0; s < hs.rank(); ++s) {
    auto one_based = [](const std::vector<std::size_t>& v) {
      std::vector<std::size_t> out(v);
      for (auto& k : out) ++k;
      return out;
    };
    classes.push_back({{"rows", one_based(hs.classes.rows[s])},
                       {"hitting", one_based(hs.classes.hitting[s])},
                       {"touching", one_based(hs.classes.touching[s])},
                       {"probabilities", law.weights()[s].probabilities}});
  }
  std::vector<std::vector<int>> h(hs.hits.rows(), std::vector<int>(hs.hits.cols()));
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = 0; j < h[i].size(); ++j) h[i][j] = hs.hits(i, j) ? 1 : 0;
  }
  json report{{"command", "inspect"}, {"n", model.n()},      {"p", model.p()},
              {"z_hat", hs.z_hat},    {"hitting", h},        {"rank", hs.rank()},
              {"classes", classes},   {"nnz", hs.hits.nnz()}};
  if (model.p() <= kMaxBruteForceColumns) {
    const auto scenarios = enumerate_relevant_scenarios(hs.hits);
    const auto sl = scenario_probabilities(scenarios, model.margins(), hs.z_hat);
    json js = json::array();
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
      std::vector<std::size_t> cols(scenarios[k]);
      for (auto& j : cols) ++j;
      js.push_back({{"columns", cols}, {"probability", sl.probabilities[k]}});
    }
    report["scenarios"] = js;
  }
  emit_report(c, report);
  return 0;
}

struct MarmaArgs {
  std::string mode = "forecast";
  std::vector<double> phi;
  std::vector<double> theta;
  std::size_t truncation = 500;
  std::size_t n_observed = 100;
  std::size_t horizon = 50;
  std::size_t reps = 200;
};

int run_marma(const Common& c, const MarmaArgs& m) {
  MarmaSpec spec;
  if (!c.model.empty()) {
    spec = io::parse_marma_spec(io::read_text(c.model));
  } else {
    spec = MarmaSpec{m.phi, m.theta, m.truncation, m.n_observed, m.horizon};
    spec.validate();
  }
  const auto psi = marma_coefficients(spec.phi, spec.theta, spec.truncation);
  double sigma = 0.0;
  for (double v : psi) sigma += v;
  json report{{"command", "marma"},
              {"mode", m.mode},
              {"phi", spec.phi},
              {"theta", spec.theta},
              {"truncation", spec.truncation},
              {"sum_psi", sigma},
              {"truncation_quality", marma_truncation_quality(psi, spec.phi, spec.theta)},
              {"seed", c.seed}};

  if (m.mode == "forecast") {
    const auto f = marma_forecast(spec, c.num, c.seed, c.quantiles, c.rel_tol);
    std::vector<std::string> header{"lag", "truth", "projection"};
    for (const auto& h : summary_header(c.quantiles)) header.push_back(h);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < f.truth.size(); ++k) {
      std::vector<double> row{static_cast<double>(k + 1), f.truth[k],
                              f.projection.empty() ? std::nan("") : f.projection[k]};
      for (double v : summary_row(f.sampling.summary.columns[k])) row.push_back(v);
      rows.push_back(std::move(row));
    }
    if (!c.out.empty()) io::write_csv_file(c.out, header, rows);
    report["observed"] = f.observed;
    report["truth"] = f.truth;
    report["projection"] = f.projection;
    report["samples"] = c.num;
    report["forecast"] = summary_json(f.sampling.summary, "lag");
  } else if (m.mode == "coverage" || m.mode == "bias") {
    MarmaExperimentConfig config;
    config.spec = spec;
    config.reps = m.reps;
    config.samples = c.num;
    config.seed = c.seed;
    config.rel_tol = c.rel_tol;
    if (m.mode == "bias" && !spec.theta.empty() &&
        std::any_of(spec.theta.begin(), spec.theta.end(), [](double v) { return v > 0.0; })) {
      throw Error(Errc::NotPureMar, "projection predictor needs q = 0");
    }
    const auto r = marma_experiment(config);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < spec.horizon; ++k) {
      rows.push_back({static_cast<double>(k + 1), r.coverage.coverage[k], r.coverage.width[k],
                      r.bias.probability[k], r.bias.below_median_rate[k]});
    }
    if (!c.out.empty()) {
      io::write_csv_file(c.out, {"lag", "coverage", "width", "projection_probability", "below_median_rate"},
                         rows);
    }
    report["reps"] = m.reps;
    report["samples"] = c.num;
    if (m.mode == "coverage") {
      report["coverage"] = r.coverage.coverage;
      report["width"] = r.coverage.width;
    } else {
      report["projection_probability"] = r.bias.probability;
      report["below_median_rate"] = r.bias.below_median_rate;
    }
  } else {
    throw Error(Errc::InvalidSpec, "unknown mode '" + m.mode + "'");
  }
  emit_report(c, report);
  return 0;
}

int run_smith(const Common& c) {
  const auto job = io::parse_smith_job(io::read_text(c.model));
  const auto f = smith_forecast(job.spec, job.values, c.num, c.seed, c.quantiles, c.rel_tol);
  const auto& sites = job.spec.prediction_sites;
  std::vector<std::string> header{"t1", "t2"};
  for (const auto& h : summary_header(c.quantiles)) header.push_back(h);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    std::vector<double> row{sites[k][0], sites[k][1]};
    for (double v : summary_row(f.sampling.summary.columns[k])) row.push_back(v);
    rows.push_back(std::move(row));
  }
  if (!c.out.empty()) io::write_csv_file(c.out, header, rows);
  json report{{"command", "smith"},
              {"sites", job.spec.observed_sites.size()},
              {"prediction_sites", sites.size()},
              {"cells", f.design.total_cells},
              {"kept_cells", f.design.kept_cells.size()},
              {"dropped_mass", f.design.dropped_mass},
              {"samples", c.num},
              {"seed", c.seed}};
  emit_report(c, report);
  return 0;
}

int run_validate(const Common& c, const ValidationConfig& v) {
  const auto r = validate_suite(v);
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) throw Error(Errc::Io, "cannot write " + c.out);
    f << r.to_json() << "\n";
  }
  for (const auto& check : r.checks) {
    std::cerr << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << "\n";
  }
  std::cout << r.to_json() << "\n";
  return r.all_passed() ? 0 : 1;
}

int run_bench(const Common& c, BenchConfig config) {
  config.seed = c.seed;
  config.rel_tol = c.rel_tol;
  const auto cells = bench_decomposition(config);
  std::vector<std::vector<double>> rows;
  json jc = json::array();
  for (const auto& cell : cells) {
    rows.push_back({static_cast<double>(cell.n), static_cast<double>(cell.p), cell.mean_seconds,
                    cell.sd_seconds});
    jc.push_back({{"n", cell.n}, {"p", cell.p}, {"mean_seconds", cell.mean_seconds},
                  {"sd_seconds", cell.sd_seconds}});
  }
  if (!c.out.empty()) io::write_csv_file(c.out, {"n", "p", "mean_seconds", "sd_seconds"}, rows);
  emit_report(c, {{"command", "bench"}, {"draws", config.draws}, {"threads", kernels::max_threads()},
                  {"cells", jc}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact conditional sampling for max-linear models"};
  app.require_subcommand(1);
  Common c;

  auto* sample = app.add_subcommand("sample", "draw from Z | A (.) Z = x and summarize B (.) Z");
  sample->add_option("--model,--spec", c.model, "model JSON with A, margins and optional B")->required();
  sample->add_option("--obs", c.obs, "observation CSV (header + one row)")->required();
  add_sampling_flags(sample, c);
  add_output_flags(sample, c, "CSV of all samples, one per row");

  auto* inspect = app.add_subcommand("inspect", "show bounds, hitting matrix and classes");
  inspect->add_option("--model,--spec", c.model, "model JSON")->required();
  inspect->add_option("--obs", c.obs, "observation CSV (header + one row)")->required();
  inspect->add_option("--rel-tol", c.rel_tol, "relative tolerance for hitting ties");
  inspect->add_option("--report", c.report, "write the JSON report here instead of stdout");

  MarmaArgs m;
  auto* marma = app.add_subcommand("marma", "MARMA forecasting and coverage experiments");
  marma->add_option("--model,--spec", c.model, "MARMA spec JSON (overrides --phi/--theta)");
  marma->add_option("--mode", m.mode, "forecast | coverage | bias")
      ->check(CLI::IsMember({"forecast", "coverage", "bias"}));
  marma->add_option("--phi", m.phi, "autoregressive coefficients")->delimiter(',');
  marma->add_option("--theta", m.theta, "moving-average coefficients")->delimiter(',');
  marma->add_option("--truncation", m.truncation, "number of lags kept");
  marma->add_option("--observed", m.n_observed, "observed path length");
  marma->add_option("--horizon", m.horizon, "forecast horizon");
  marma->add_option("--reps", m.reps, "repetitions for coverage/bias")->check(CLI::PositiveNumber);
  add_sampling_flags(marma, c);
  add_output_flags(marma, c, "per-lag CSV");

  auto* smith = app.add_subcommand("smith", "conditional sampling of a discretized Smith field");
  smith->add_option("--model,--spec", c.model, "Smith job JSON")->required();
  add_sampling_flags(smith, c);
  add_output_flags(smith, c, "per-site summary CSV");

  ValidationConfig v;
  auto* validate = app.add_subcommand("validate", "run the built-in self checks");
  validate->add_option("--seed", v.seed, "random seed");
  validate->add_option("--trials", v.trials, "random instances per check");
  validate->add_option("--epsilon", v.epsilon, "rejection-oracle band");
  validate->add_option("--accepted", v.accepted, "rejection-oracle acceptances");
  validate->add_option("--rel-tol", v.rel_tol, "relative tolerance for hitting ties");
  validate->add_option("--out", c.out, "also write the JSON report here");

  BenchConfig b;
  auto* bench = app.add_subcommand("bench", "time the decomposition on Smith designs");
  bench->add_option("--ns", b.ns, "observation counts")->delimiter(',');
  bench->add_option("--ps", b.ps, "factor counts, each (2q)^2")->delimiter(',');
  bench->add_option("--draws", b.draws, "timed decompositions per cell")->check(CLI::PositiveNumber);
  bench->add_option("--seed", c.seed, "random seed");
  bench->add_option("--rel-tol", c.rel_tol, "relative tolerance for hitting ties");
  add_output_flags(bench, c, "timing CSV");

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "sample") return run_sample(c);
    if (name == "inspect") return run_inspect(c);
    if (name == "marma") return run_marma(c, m);
    if (name == "smith") return run_smith(c);
    if (name == "validate") return run_validate(c, v);
    if (name == "bench") return run_bench(c, b);
  } catch (const Error& e) {
    std::cerr << "maxlin " << name << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "maxlin " << name << ": " << e.what() << "\n";
    return 2;
  }
  return 2;
}
