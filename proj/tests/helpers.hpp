#pragma once

#include <vector>

#include "maxlin/error.hpp"
#include "maxlin/margin.hpp"
#include "maxlin/matrix.hpp"
#include "support/oracles.hpp"

namespace test {

inline std::vector<maxlin::MarginSpec> unit_frechet(std::size_t p) {
  return std::vector<maxlin::MarginSpec>(p, maxlin::MarginSpec::frechet(1.0, 1.0));
}

inline maxlin::Matrix example_matrix() {
  return maxlin::Matrix::from_rows({{1, 0, 0}, {1, 1, 0}, {1, 1, 1}});
}

inline maxlin::Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  return maxlin::Matrix::from_rows(rows);
}

template <class F>
maxlin::Errc error_code(F&& f) {
  try {
    f();
  } catch (const maxlin::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected a maxlin::Error");
}

}  // namespace test
