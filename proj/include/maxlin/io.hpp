#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maxlin/marma.hpp"
#include "maxlin/model.hpp"
#include "maxlin/smith.hpp"

namespace maxlin::io {

// {"A": [[...], ...], "margins": [{"kind": "frechet", "alpha": 1, "scale": 1}, ...],
//  "B": [[...], ...]}   -- "B" optional.
// Tabulated margins: {"kind": "tabulated", "knots": [...], "density": [...]}.
struct ModelFile {
  Matrix a;
  std::vector<MarginSpec> margins;
  std::optional<Matrix> b;
};

ModelFile parse_model(std::string_view json_text);
ModelFile load_model(const std::string& path);
std::string model_to_json(const Matrix& a, const std::vector<MarginSpec>& margins,
                          const Matrix* b = nullptr);

// {"phi": [...], "theta": [...], "truncation": p, "n_observed": n, "horizon": N}
MarmaSpec parse_marma_spec(std::string_view json_text);

// {"rho", "beta1", "beta2", "M", "q", "alpha", "floor_rel",
//  "sites": [[t1, t2], ...], "values": [...],
//  "grid": {"lo": -2, "hi": 2, "k": 100}, "prediction_sites": [[t1, t2], ...],
//  "include_sites": true}
// Prediction sites are the listed ones, then the grid, then (if include_sites) the
// observed sites.
struct SmithJob {
  SmithSpec spec;
  std::vector<double> values;
};
SmithJob parse_smith_job(std::string_view json_text);

std::string read_text(const std::string& path);

// CSV with a mandatory header row; every other row is numeric.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
Table parse_csv(std::string_view text);
Table read_csv(const std::string& path);

// Single observation vector: header row plus exactly one data row.
std::vector<double> read_observation(const std::string& path);

std::string format_number(double v);
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows);

}  // namespace maxlin::io
