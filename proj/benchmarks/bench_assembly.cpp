#include <benchmark/benchmark.h>

#include "coa/discretize.hpp"
#include "coa/model.hpp"

namespace {

coa::ModelSpec gaussian_model() {
  return {coa::Domain::compact(-1.0, 1.0), coa::FitnessProfile::quadratic(1.0, 1.0),
          coa::MutationKernel::gaussian_difference(1.0, 0.3)};
}

void BM_NystromAssembly(benchmark::State& state) {
  const coa::ModelSpec model = gaussian_model();
  const coa::LossFunction loss = coa::loss_function(model, 1024);
  const coa::Partition part =
      coa::uniform_partition(-1.0, 1.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto op = coa::nystrom_matrices(model, loss, part);
    benchmark::DoNotOptimize(op);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NystromAssembly)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_GalerkinAveragedAssembly(benchmark::State& state) {
  const coa::ModelSpec model = gaussian_model();
  const coa::LossFunction loss = coa::loss_function(model, 1024);
  const coa::Partition part =
      coa::uniform_partition(-1.0, 1.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto op = coa::galerkin_matrices(model, loss, part, coa::Method::GalerkinAveraged, 4);
    benchmark::DoNotOptimize(op);
  }
}
BENCHMARK(BM_GalerkinAveragedAssembly)->RangeMultiplier(2)->Range(32, 256);

void BM_TvDistance(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const coa::Partition coarse = coa::uniform_partition(-1.0, 1.0, n);
  const coa::Partition fine = coa::uniform_partition(-1.0, 1.0, 2 * n);
  std::vector<double> a(n, 0.5), b(2 * n, 0.5);
  const coa::StepDensity da{coarse, a};
  const coa::StepDensity db{fine, b};
  for (auto _ : state) benchmark::DoNotOptimize(coa::tv_distance(da, db));
}
BENCHMARK(BM_TvDistance)->RangeMultiplier(4)->Range(256, 16384);

}  // namespace
