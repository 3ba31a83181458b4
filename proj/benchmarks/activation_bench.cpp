#include <benchmark/benchmark.h>

#include <vector>

#include "sgblend/experiment.hpp"
#include "sgblend/nn.hpp"
#include "sgblend/rng.hpp"

namespace {

using namespace sgblend;

std::vector<double> bench_inputs(std::size_t n) {
  SplitMix64 rng(12345);
  std::vector<double> xs(n);
  for (double& x : xs) x = rng.uniform(-6.0, 6.0);
  return xs;
}

void BM_Forward(benchmark::State& state) {
  const ActivationKind kind = all_kinds[static_cast<std::size_t>(state.range(0))];
  const std::vector<double> xs = bench_inputs(4096);
  const ActivationParams p;
  for (auto _ : state) {
    double acc = 0.0;
    for (double x : xs) acc += forward(kind, p, x);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Forward)->DenseRange(0, 6);

void BM_DInput(benchmark::State& state) {
  const ActivationKind kind = all_kinds[static_cast<std::size_t>(state.range(0))];
  const std::vector<double> xs = bench_inputs(4096);
  const ActivationParams p;
  for (auto _ : state) {
    double acc = 0.0;
    for (double x : xs) acc += d_input(kind, p, x);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_DInput)->DenseRange(0, 6);

void BM_LayerForwardBackward(benchmark::State& state) {
  const ActivationKind kind = all_kinds[static_cast<std::size_t>(state.range(0))];
  DenseLayer layer(32, 32, kind);
  SplitMix64 rng(7);
  for (double& w : layer.W.data()) w = rng.uniform(-0.3, 0.3);
  Matrix x(64, 32);
  for (double& v : x.data()) v = rng.uniform(-2.0, 2.0);
  Matrix dy(64, 32, 0.01);
  for (auto _ : state) {
    Matrix y = layer.forward(x);
    benchmark::DoNotOptimize(y);
    layer.zero_grads();
    Matrix dx = layer.backward(dy);
    benchmark::DoNotOptimize(dx);
  }
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_LayerForwardBackward)->DenseRange(0, 6);

void BM_TrainEpoch(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.dataset.source = "two_moons";
  cfg.dataset.n = 512;
  cfg.dataset.seed = 3;
  cfg.model.hidden = {32, 32};
  cfg.max_epochs = 1000000;
  cfg.plateau_enabled = false;
  cfg.early_stop_enabled = false;
  Trainer trainer(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(trainer.step_epoch());
  }
}
BENCHMARK(BM_TrainEpoch);

}  // namespace

BENCHMARK_MAIN();
