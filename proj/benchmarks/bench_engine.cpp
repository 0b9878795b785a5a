// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "ordevo/evolution.hpp"
#include "ordevo/experiments.hpp"
#include "ordevo/fitness.hpp"
#include "ordevo/noise.hpp"
#include "ordevo/oracle.hpp"

namespace {

void BM_NoiseDraw(benchmark::State& state) {
  const ordevo::NoiseStream noise(42);
  std::uint64_t slot = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(noise.draw(7, slot++, 0));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NoiseDraw);

void BM_NoiseFill(benchmark::State& state) {
  const ordevo::NoiseStream noise(42);
  std::vector<double> out(static_cast<std::size_t>(state.range(0)));
  std::uint64_t slot = 0;
  for (auto _ : state) {
    noise.fill(7, slot++, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NoiseFill)->Arg(1)->Arg(2)->Arg(4);

void BM_SelectTopK(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const ordevo::NoiseStream noise(1);
  std::vector<double> fitness(n);
  for (std::size_t i = 0; i < n; ++i) fitness[i] = noise.draw(0, i, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ordevo::select_top_k(fitness, k));
  }
}
BENCHMARK(BM_SelectTopK)->Args({2048, 2})->Args({4096, 256})->Args({16384, 1024});

void BM_StepGeneration(benchmark::State& state) {
  const auto order = static_cast<std::size_t>(state.range(0));
  const ordevo::SelectionConfig sel{256, 4096};
  const ordevo::MutationConfig mut{0.1, false, true};
  const ordevo::NoiseStream noise(3);
  const auto task = ordevo::FitnessTask::time_series(ordevo::Target::Sine);
  ordevo::Population pop = ordevo::init_population(order, sel);
  pop.lineage.clear();
  ordevo::Population next;
  std::vector<double> fitness(sel.population_size);
  for (auto _ : state) {
    ordevo::evaluate_population(task, pop, fitness);
    ordevo::step_generation_into(pop, fitness, sel, mut, noise, next);
    std::swap(pop, next);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(sel.population_size));
}
BENCHMARK(BM_StepGeneration)->DenseRange(0, 3);

void BM_CoupledTrial(benchmark::State& state) {
  const ordevo::SelectionConfig sel{2, 8};
  const ordevo::MutationConfig mut;
  const ordevo::PerturbationSpec pert{0, 1.0, static_cast<std::size_t>(state.range(0))};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ordevo::run_coupled_trial(sel, mut, pert, seed++));
  }
}
BENCHMARK(BM_CoupledTrial)->Arg(1)->Arg(3);

void BM_RunEvolutionDesk(benchmark::State& state) {
  ordevo::RunConfig cfg;
  cfg.task = ordevo::FitnessTask::numeric();
  cfg.order = {2, false};
  cfg.selection = {2, 2048};
  cfg.generations = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ordevo::run_evolution(cfg));
  }
}
BENCHMARK(BM_RunEvolutionDesk)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
