// Serial reference vs OpenMP kernels on a Smith design (n sites, p = (2q)^2 cells).

#include <benchmark/benchmark.h>

#include "maxlin/conditional.hpp"
#include "maxlin/hitting.hpp"
#include "maxlin/kernels.hpp"
#include "maxlin/marma.hpp"
#include "maxlin/rng.hpp"
#include "maxlin/sampler.hpp"
#include "maxlin/smith.hpp"

using namespace maxlin;

namespace {

struct Fixture {
  MaxLinearModel model;
  std::vector<double> x;
  std::vector<double> z_hat;
};

Fixture make_fixture(std::size_t n, std::size_t q) {
  RngStream rng(1, n * 1000 + q);
  SmithSpec spec;
  spec.q = q;
  spec.floor_rel = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    spec.observed_sites.push_back({4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0});
  }
  auto design = smith_design(spec);
  const std::size_t p = design.observed.cols();
  auto model = validate_model(std::move(design.observed),
                              std::vector<MarginSpec>(p, MarginSpec::frechet(1.0, 1.0)));
  const auto z = draw_unit_frechet(p, rng);
  auto x = max_linear_apply(model.coefficients(), z);
  auto z_hat = kernels::serial::upper_bounds(model.coefficients(), x);
  return {std::move(model), std::move(x), std::move(z_hat)};
}

template <bool Parallel>
void upper_bounds(benchmark::State& state) {
  const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    auto zh = Parallel ? kernels::omp::upper_bounds(f.model.coefficients(), f.x)
                       : kernels::serial::upper_bounds(f.model.coefficients(), f.x);
    benchmark::DoNotOptimize(zh.data());
  }
}

template <bool Parallel>
void hitting_matrix(benchmark::State& state) {
  const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  HitMatrix h(f.model.n(), f.model.p());
  for (auto _ : state) {
    const auto miss =
        Parallel ? kernels::omp::hitting_matrix(f.model.coefficients(), f.x, f.z_hat, kDefaultRelTol, h)
                 : kernels::serial::hitting_matrix(f.model.coefficients(), f.x, f.z_hat, kDefaultRelTol, h);
    benchmark::DoNotOptimize(miss);
  }
}

template <bool Parallel>
void max_times_batch(benchmark::State& state) {
  const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  RngStream rng(2, 0);
  Matrix z(200, f.model.p());
  for (auto& v : z.data()) v = rng.uniform();
  Matrix out;
  for (auto _ : state) {
    if (Parallel) {
      kernels::omp::max_times_batch(f.model.coefficients(), z, out);
    } else {
      kernels::serial::max_times_batch(f.model.coefficients(), z, out);
    }
    benchmark::DoNotOptimize(out.data().data());
  }
}

template <bool Parallel>
void conditional_batch(benchmark::State& state) {
  const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  const auto law = build_conditional_law(f.model, f.x);
  for (auto _ : state) {
    auto m = Parallel ? sample_batch(law, 100, 3) : sample_batch_serial(law, 100, 3);
    benchmark::DoNotOptimize(m.data().data());
  }
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : {5, 50}) {
    for (int q : {25, 50}) b->Args({n, q});
  }
  b->ArgNames({"n", "q"})->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(upper_bounds<false>)->Apply(sizes);
BENCHMARK(upper_bounds<true>)->Apply(sizes);
BENCHMARK(hitting_matrix<false>)->Apply(sizes);
BENCHMARK(hitting_matrix<true>)->Apply(sizes);
BENCHMARK(max_times_batch<false>)->Apply(sizes);
BENCHMARK(max_times_batch<true>)->Apply(sizes);
BENCHMARK(conditional_batch<false>)->Apply(sizes);
BENCHMARK(conditional_batch<true>)->Apply(sizes);

BENCHMARK_MAIN();
