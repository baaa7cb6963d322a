#include "maxlin/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "maxlin/error.hpp"

namespace maxlin::io {
namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidSpec, std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidSpec, std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(Errc::InvalidSpec, std::string("missing field '") + key + "'");
  return get_or<T>(j, key, T{});
}

Matrix matrix_field(const json& j, const char* key) {
  return Matrix::from_rows(require<std::vector<std::vector<double>>>(j, key));
}

MarginSpec parse_margin(const json& m) {
  const auto kind = require<std::string>(m, "kind");
  if (kind == "frechet") {
    return MarginSpec::frechet(get_or<double>(m, "alpha", 1.0), get_or<double>(m, "scale", 1.0));
  }
  if (kind == "tabulated") {
    return MarginSpec::tabulated(require<std::vector<double>>(m, "knots"),
                                 require<std::vector<double>>(m, "density"));
  }
  throw Error(Errc::InvalidMargin, "unknown margin kind '" + kind + "'");
}

json margin_to_json(const MarginSpec& m) {
  if (!m.is_frechet()) throw Error(Errc::InvalidMargin, "only Frechet margins are serialized");
  return {{"kind", "frechet"}, {"alpha", m.as_frechet().alpha}, {"scale", m.as_frechet().scale}};
}

std::vector<Site> sites_field(const json& j, const char* key) {
  std::vector<Site> out;
  for (const auto& s : get_or<std::vector<std::vector<double>>>(j, key, {})) {
    if (s.size() != 2) throw Error(Errc::InvalidSpec, std::string(key) + ": sites are [t1, t2]");
    out.push_back({s[0], s[1]});
  }
  return out;
}

}  // namespace

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelFile parse_model(std::string_view json_text) {
  const json j = parse_json(json_text);
  ModelFile f;
  f.a = matrix_field(j, "A");
  if (!j.contains("margins") || !j.at("margins").is_array()) {
    throw Error(Errc::InvalidSpec, "missing array field 'margins'");
  }
  for (const auto& m : j.at("margins")) f.margins.push_back(parse_margin(m));
  if (j.contains("B")) f.b = matrix_field(j, "B");
  return f;
}

ModelFile load_model(const std::string& path) { return parse_model(read_text(path)); }

std::string model_to_json(const Matrix& a, const std::vector<MarginSpec>& margins, const Matrix* b) {
  json j;
  j["A"] = a.to_rows();
  j["margins"] = json::array();
  for (const auto& m : margins) j["margins"].push_back(margin_to_json(m));
  if (b != nullptr) j["B"] = b->to_rows();
  return j.dump();
}

MarmaSpec parse_marma_spec(std::string_view json_text) {
  const json j = parse_json(json_text);
  MarmaSpec s;
  s.phi = get_or<std::vector<double>>(j, "phi", {});
  s.theta = get_or<std::vector<double>>(j, "theta", {});
  s.truncation = get_or<std::size_t>(j, "truncation", s.truncation);
  s.n_observed = get_or<std::size_t>(j, "n_observed", s.n_observed);
  s.horizon = get_or<std::size_t>(j, "horizon", s.horizon);
  s.validate();
  return s;
}

SmithJob parse_smith_job(std::string_view json_text) {
  const json j = parse_json(json_text);
  SmithJob job;
  auto& s = job.spec;
  s.rho = get_or<double>(j, "rho", s.rho);
  s.beta1 = get_or<double>(j, "beta1", s.beta1);
  s.beta2 = get_or<double>(j, "beta2", s.beta2);
  s.half_width = get_or<double>(j, "M", s.half_width);
  s.q = get_or<std::size_t>(j, "q", s.q);
  s.alpha = get_or<double>(j, "alpha", s.alpha);
  s.floor_rel = get_or<double>(j, "floor_rel", s.floor_rel);
  s.observed_sites = sites_field(j, "sites");
  job.values = require<std::vector<double>>(j, "values");
  if (job.values.size() != s.observed_sites.size()) {
    throw Error(Errc::InvalidSpec, "'values' needs one entry per site");
  }
  s.prediction_sites = sites_field(j, "prediction_sites");
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    const auto grid = uniform_grid(get_or<double>(g, "lo", -2.0), get_or<double>(g, "hi", 2.0),
                                   get_or<std::size_t>(g, "k", 100));
    s.prediction_sites.insert(s.prediction_sites.end(), grid.begin(), grid.end());
  }
  if (get_or<bool>(j, "include_sites", true)) {
    s.prediction_sites.insert(s.prediction_sites.end(), s.observed_sites.begin(),
                              s.observed_sites.end());
  }
  s.validate();
  return job;
}

Table parse_csv(std::string_view text) {
  Table t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    ++line_no;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (line_no == 1) {
      for (auto c : cells) t.header.emplace_back(c);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw Error(Errc::InvalidSpec, "CSV line " + std::to_string(line_no) + " has " +
                                         std::to_string(cells.size()) + " cells, header has " +
                                         std::to_string(t.header.size()));
    }
    std::vector<double> row;
    for (auto c : cells) {
      while (!c.empty() && c.front() == ' ') c.remove_prefix(1);
      while (!c.empty() && c.back() == ' ') c.remove_suffix(1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size()) {
        throw Error(Errc::InvalidSpec, "CSV line " + std::to_string(line_no) + ": '" +
                                           std::string(c) + "' is not a number");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw Error(Errc::InvalidSpec, "CSV header row missing");
  return t;
}

Table read_csv(const std::string& path) { return parse_csv(read_text(path)); }

std::vector<double> read_observation(const std::string& path) {
  auto t = read_csv(path);
  if (t.rows.size() != 1) {
    throw Error(Errc::InvalidSpec, path + ": expected exactly one data row, found " +
                                       std::to_string(t.rows.size()));
  }
  return std::move(t.rows.front());
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << format_number(r[k]);
    os << '\n';
  }
}

void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  write_csv(out, header, rows);
  if (!out) throw Error(Errc::Io, "write failed for " + path);
}

}  // namespace maxlin::io
