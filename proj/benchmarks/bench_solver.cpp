#include <benchmark/benchmark.h>

#include "coa/convergence.hpp"
#include "coa/eigensolver.hpp"
#include "coa/model.hpp"

namespace {

coa::DiscreteOperator benchmark_operator(std::size_t cells) {
  const coa::ModelSpec model{coa::Domain::compact(-1.0, 1.0),
                             coa::FitnessProfile::quadratic(1.0, 1.0),
                             coa::MutationKernel::gaussian_difference(1.0, 0.3)};
  const coa::LossFunction loss = coa::loss_function(model, 4 * cells);
  return coa::nystrom_matrices(model, loss, coa::uniform_partition(-1.0, 1.0, cells));
}

void BM_PerronDirect(benchmark::State& state) {
  const auto op = benchmark_operator(static_cast<std::size_t>(state.range(0)));
  const coa::SolverConfig cfg;
  for (auto _ : state) {
    auto res = coa::perron_eigenpair(op, cfg);
    benchmark::DoNotOptimize(res);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PerronDirect)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_PerronBisection(benchmark::State& state) {
  const auto op = benchmark_operator(static_cast<std::size_t>(state.range(0)));
  const coa::SolverConfig cfg;
  for (auto _ : state) {
    auto res = coa::solve_via_bisection(op, cfg);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_PerronBisection)->RangeMultiplier(2)->Range(64, 512);

void BM_MatVec(benchmark::State& state) {
  const auto op = benchmark_operator(static_cast<std::size_t>(state.range(0)));
  std::vector<double> x(op.size(), 1.0), y;
  for (auto _ : state) {
    coa::matvec(op.u_matrix, x, y);
    benchmark::DoNotOptimize(y);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MatVec)->RangeMultiplier(2)->Range(128, 4096)->Complexity();

}  // namespace
