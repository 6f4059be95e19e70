#include <benchmark/benchmark.h>

#include <map>

#include "varcomp/comparators.hpp"
#include "varcomp/interval.hpp"
#include "varcomp/reml.hpp"
#include "varcomp/simulate.hpp"

namespace {

using namespace varcomp;

const Eigen::VectorXd& ar1_spectrum(Eigen::Index n) {
  static std::map<Eigen::Index, Eigen::VectorXd> cache;
  auto [it, fresh] = cache.try_emplace(n);
  if (fresh) {
    it->second = kernel_eigenvalues(materialize_kernel(Ar1Kernel{0.95}, n));
  }
  return it->second;
}

RotatedData dataset(Eigen::Index n) {
  SimCell cell;
  cell.n = n;
  cell.h2 = 0.5;
  cell.p = 5;
  Rng rng(derive_seed(2024, static_cast<std::uint64_t>(n)));
  return generate_rotated(cell, ar1_spectrum(n), rng);
}

void BM_Eigendecomposition(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Eigen::MatrixXd kernel = materialize_kernel(Ar1Kernel{0.95}, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decompose(kernel, Eigen::MatrixXd::Ones(n, 1)));
  }
  state.SetComplexityN(n);
}

void BM_TStat(benchmark::State& state) {
  const RotatedData rd = dataset(state.range(0));
  RemlEvaluator eval(rd);
  double h2 = 0.1;
  for (auto _ : state) {
    h2 = h2 > 0.9 ? 0.1 : h2 + 0.01;
    benchmark::DoNotOptimize(eval.t_stat_h2(h2));
  }
  state.SetComplexityN(state.range(0));
}

void BM_TwoSidedInterval(benchmark::State& state) {
  const RotatedData rd = dataset(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(invert_two_sided(rd));
  }
  state.SetComplexityN(state.range(0));
}

void BM_OneSidedLowerBound(benchmark::State& state) {
  const RotatedData rd = dataset(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(invert_one_sided_lower(rd));
  }
  state.SetComplexityN(state.range(0));
}

void BM_RemlEstimate(benchmark::State& state) {
  const RotatedData rd = dataset(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reml_estimate(rd));
  }
  state.SetComplexityN(state.range(0));
}

void BM_RlrInterval(benchmark::State& state) {
  const RotatedData rd = dataset(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rlr_interval(rd, 0.05));
  }
  state.SetComplexityN(state.range(0));
}

BENCHMARK(BM_Eigendecomposition)->Arg(200)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TStat)->RangeMultiplier(2)->Range(250, 2000)->Complexity(benchmark::oN);
BENCHMARK(BM_TwoSidedInterval)
    ->Arg(200)->Arg(500)->Arg(1000)->Arg(2000)
    ->Unit(benchmark::kMicrosecond)
    ->Complexity(benchmark::oN);
BENCHMARK(BM_OneSidedLowerBound)
    ->Arg(200)->Arg(500)->Arg(1000)->Arg(2000)
    ->Unit(benchmark::kMicrosecond)
    ->Complexity(benchmark::oN);
BENCHMARK(BM_RemlEstimate)->Arg(200)->Arg(2000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RlrInterval)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
