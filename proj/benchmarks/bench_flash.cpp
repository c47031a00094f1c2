#include <benchmark/benchmark.h>

#include "flash/arch_space.hpp"
#include "flash/fixtures.hpp"
#include "flash/hw_model.hpp"
#include "flash/optimizer.hpp"
#include "flash/topology.hpp"

namespace {

using namespace flash;

const SpaceSpec& default_spec() {
  static const SpaceSpec spec;
  return spec;
}

const std::vector<ArchConfig>& config_pool() {
  static const auto pool = sample_uniform(default_spec(), 1, 512);
  return pool;
}

CostModels truth_models() {
  const FixtureTruth truth;
  CostModels cost;
  cost.lat_comp.weights.assign(truth.latency_weights.begin(),
                               truth.latency_weights.begin() + 4);
  cost.lat_noc.weights.assign(truth.latency_weights.begin() + 4,
                              truth.latency_weights.end());
  cost.energy.weights = truth.energy_weights;
  cost.area.weights = {truth.area_per_tile, truth.area_rest};
  return cost;
}

void BM_NnDegree(benchmark::State& state) {
  const auto& pool = config_pool();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nn_degree(pool[i % pool.size()], default_spec()));
    ++i;
  }
}
BENCHMARK(BM_NnDegree);

void BM_Features(benchmark::State& state) {
  const HwConfig hw;
  const auto& pool = config_pool();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(features(pool[i % pool.size()], default_spec(), hw));
    ++i;
  }
}
BENCHMARK(BM_Features);

void BM_SearchSpaceSize(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(search_space_size(default_spec()));
  }
}
BENCHMARK(BM_SearchSpaceSize);

void BM_SampleUniform(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_uniform(default_spec(), 42, 100));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SampleUniform);

void BM_TrainingFreeSearch(benchmark::State& state) {
  const HwConfig hw;
  const FixtureTruth truth;
  const AccuracyModel accuracy = truth.accuracy;
  const CostModels cost = truth_models();
  const Objective objective{ObjectiveMode::nn_degree, &default_spec(), &hw,
                            &accuracy, &cost};
  Constraints constraints;
  constraints.latency_max = 1e6;
  const std::size_t n = std::size_t(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        training_free_search(default_spec(), objective, constraints, n, 7));
  }
  state.SetItemsProcessed(state.iterations() * int64_t(n));
}
BENCHMARK(BM_TrainingFreeSearch)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_HierarchicalSearch(benchmark::State& state) {
  SpaceSpec spec;
  spec.w_m_max = 2;
  spec.d_c_max = 7;
  spec.base_widths = {4, 8, 16};
  spec.t1_min = 2;
  const HwConfig hw;
  const FixtureTruth truth;
  const AccuracyModel accuracy = truth.accuracy;
  const CostModels cost = truth_models();
  const Objective objective{ObjectiveMode::full, &spec, &hw, &accuracy, &cost};
  const int lambda = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hierarchical_search(spec, objective, {}, lambda));
  }
}
BENCHMARK(BM_HierarchicalSearch)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
