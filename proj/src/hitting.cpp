#include "maxlin/hitting.hpp"

#include <limits>
#include <sstream>
#include <string>

#include "maxlin/error.hpp"
#include "maxlin/kernels.hpp"
#include "maxlin/union_find.hpp"

namespace maxlin {
namespace {

std::string shortest(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
}

HitMatrix HitMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t p = n == 0 ? 0 : rows.front().size();
  HitMatrix h(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != p) throw Error(Errc::DimensionMismatch, "ragged hitting matrix");
    for (std::size_t j = 0; j < p; ++j) h.set(i, j, rows[i][j] != 0);
  }
  return h;
}

std::size_t HitMatrix::nnz() const noexcept {
  std::size_t count = 0;
  for (auto b : bits_) count += b;
  return count;
}

std::vector<double> compute_upper_bounds(const MaxLinearModel& model, std::span<const double> x) {
  if (x.size() != model.n()) {
    throw Error(Errc::DimensionMismatch, "observation has " + std::to_string(x.size()) +
                                             " entries, model has " + std::to_string(model.n()) +
                                             " rows");
  }
  check_observation(x);
  return kernels::omp::upper_bounds(model.coefficients(), x);
}

HitMatrix compute_hitting_matrix(const MaxLinearModel& model, std::span<const double> x,
                                 std::span<const double> z_hat, double rel_tol) {
  if (x.size() != model.n() || z_hat.size() != model.p()) {
    throw Error(Errc::DimensionMismatch, "observation or bound vector has the wrong length");
  }
  HitMatrix hits;
  const std::size_t missing =
      kernels::omp::hitting_matrix(model.coefficients(), x, z_hat, rel_tol, hits);
  if (missing != kNone) {
    throw Error(Errc::InconsistentObservation,
                "x[" + std::to_string(missing) + "] = " + shortest(x[missing]) +
                    " is not attained by any column at its upper bound; x is outside the range of A");
  }
  return hits;
}

Decomposition decompose(const HitMatrix& hits) {
  const std::size_t n = hits.rows();
  const std::size_t p = hits.cols();
  UnionFind uf(n);
  std::vector<std::size_t> first_row(p, kNone);
  std::vector<std::size_t> column_count(p, 0);

  for (std::size_t i = 0; i < n; ++i) {
    auto r = hits.row(i);
    bool any = false;
    for (std::size_t j = 0; j < p; ++j) {
      if (!r[j]) continue;
      any = true;
      ++column_count[j];
      if (first_row[j] == kNone) {
        first_row[j] = i;
      } else {
        uf.unite(first_row[j], i);
      }
    }
    if (!any) {
      throw Error(Errc::MalformedHittingMatrix, "row " + std::to_string(i) + " has no hit");
    }
  }

  Decomposition d;
  d.row_class.assign(n, kNone);
  std::vector<std::size_t> root_class(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.find(i);
    if (root_class[root] == kNone) {
      root_class[root] = d.rows.size();
      d.rows.emplace_back();
    }
    d.row_class[i] = root_class[root];
    d.rows[d.row_class[i]].push_back(i);
  }

  const std::size_t r = d.rows.size();
  d.hitting.resize(r);
  d.touching.resize(r);
  d.column_class.assign(p, kNone);
  for (std::size_t j = 0; j < p; ++j) {
    if (first_row[j] == kNone) {
      throw Error(Errc::MalformedHittingMatrix, "column " + std::to_string(j) + " has no hit");
    }
    const std::size_t s = d.row_class[first_row[j]];
    d.column_class[j] = s;
    d.touching[s].push_back(j);
    if (column_count[j] == d.rows[s].size()) d.hitting[s].push_back(j);
  }
  for (std::size_t s = 0; s < r; ++s) {
    if (d.hitting[s].empty()) {
      throw Error(Errc::EmptyScenarioClass,
                  "class " + std::to_string(s) + " (first row " + std::to_string(d.rows[s][0]) +
                      ") has no column hitting all of its rows");
    }
  }
  return d;
}

HittingStructure analyze(const MaxLinearModel& model, std::span<const double> x, double rel_tol) {
  HittingStructure hs;
  hs.z_hat = compute_upper_bounds(model, x);
  hs.hits = compute_hitting_matrix(model, x, hs.z_hat, rel_tol);
  hs.classes = decompose(hs.hits);
  return hs;
}

}  // namespace maxlin
