#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "vrtos/data.hpp"
#include "vrtos/penalty.hpp"
#include "vrtos/prox.hpp"
#include "vrtos/rng.hpp"
#include "vrtos/solver.hpp"

using namespace vrtos;

namespace {

std::vector<double> random_vector(std::size_t p, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> x(p);
  for (auto& v : x) v = rng.uniform(-2.0, 2.0);
  return x;
}

void BM_ProxL1Scaled(benchmark::State& state) {
  const std::size_t p = state.range(0);
  const std::vector<double> x = random_vector(p, 1);
  const std::vector<double> d(p, 1.5);
  std::vector<double> out(p);
  for (auto _ : state) {
    prox_l1_scaled(x, 0.1, d, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * p);
}
BENCHMARK(BM_ProxL1Scaled)->Arg(1 << 10)->Arg(1 << 14);

void BM_ProxGroupLasso(benchmark::State& state) {
  const std::size_t p = state.range(0);
  const auto groups = chained_groups(p, 10, 0);
  const GroupLassoPenalty penalty(p, groups, 0.05);
  const std::vector<double> x = random_vector(p, 2);
  std::vector<double> out(p);
  for (auto _ : state) {
    penalty.scaled_prox(x, 0.1, {}, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * p);
}
BENCHMARK(BM_ProxGroupLasso)->Arg(1 << 10)->Arg(1 << 14);

void BM_PartialGradient(benchmark::State& state) {
  const std::size_t n = 512, p = state.range(0);
  const auto model = std::make_shared<SmoothModel>(
      generate_synthetic(n, p, 0.02, TaskKind::logistic, 3), LossKind::logistic,
      1e-3);
  const std::vector<double> z = random_vector(p, 4);
  RandomStream rng(5);
  for (auto _ : state) {
    const std::size_t i = rng.bounded(n);
    const double lp = model->scalar_derivative(i, model->row_dot(i, z.data()));
    benchmark::DoNotOptimize(lp);
  }
}
BENCHMARK(BM_PartialGradient)->Arg(1 << 12)->Arg(1 << 16);

void BM_DrProxSum(benchmark::State& state) {
  const std::size_t p = 512;
  const auto groups = chained_groups(p, 10, 2);
  const auto [odd, even] = split_groups_odd_even(groups);
  const GroupLassoPenalty g(p, odd, 0.05), h(p, even, 0.05);
  const std::vector<double> x = random_vector(p, 6);
  std::vector<double> warm;
  for (auto _ : state) {
    auto out = dr_prox_sum(x, 0.1, g, h, 10, &warm);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_DrProxSum);

void solver_epoch(benchmark::State& state, SolverKind kind) {
  const std::size_t n = 2048, p = 512;
  const auto model = std::make_shared<SmoothModel>(
      generate_synthetic(n, p, 0.02, TaskKind::logistic, 7), LossKind::logistic,
      1.0 / n);
  const auto groups = chained_groups(p, 10, 2);
  const auto [odd, even] = split_groups_odd_even(groups);
  const auto g = std::make_shared<GroupLassoPenalty>(p, odd, 0.01);
  const auto h = std::make_shared<GroupLassoPenalty>(p, even, 0.01);
  const Problem problem = kind == SolverKind::vrtos_k
                              ? Problem::k_term(model, {g, h})
                              : Problem::two_term(model, g, h);
  SolverConfig cfg;
  cfg.seed = 8;
  auto solver = make_solver(problem, kind, cfg);
  for (auto _ : state) {
    for (std::size_t s = 0; s < n; ++s) solver->step();
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_DenseEpoch(benchmark::State& state) {
  solver_epoch(state, SolverKind::vrtos);
}
BENCHMARK(BM_DenseEpoch);

void BM_SparseConsensusEpoch(benchmark::State& state) {
  solver_epoch(state, SolverKind::vrtos_k);
}
BENCHMARK(BM_SparseConsensusEpoch);

}  // namespace

BENCHMARK_MAIN();
