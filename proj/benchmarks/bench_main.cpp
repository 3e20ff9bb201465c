#include <benchmark/benchmark.h>

#include "ridgepois/mp_transforms.hpp"
#include "ridgepois/resolvent_lab.hpp"
#include "ridgepois/simulator.hpp"
#include "ridgepois/theory.hpp"
#include "ridgepois/woodbury.hpp"

namespace rp = ridgepois;

namespace {

void BM_TransformValues(benchmark::State& state) {
  double z = -0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rp::mp_transform_values(rp::AspectRatio{0.5}, z));
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_TransformValues);

void BM_Predict(benchmark::State& state) {
  const rp::ModelParams params{0.1, 0.1, 0.1, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(rp::predict(params));
}
BENCHMARK(BM_Predict);

rp::CenteredData dataset(std::uint64_t p, std::uint64_t n) {
  rp::CleanData d = rp::generate_clean({p, n, 1});
  const Eigen::VectorXd v = rp::make_trigger(p, 1.0, rp::TriggerDirection::FirstAxis, 1);
  return rp::center(rp::apply_poison(std::move(d.X), std::move(d.y), 0.1, v, 1), 0.1);
}

// Args: p, n
void BM_RidgePrimal(benchmark::State& state) {
  const rp::CenteredData c = dataset(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(rp::ridge_weights_primal(c.X_tilde, c.w_tilde, 0.1));
}
BENCHMARK(BM_RidgePrimal)->Args({100, 1000})->Args({500, 5000})->Unit(benchmark::kMillisecond);

void BM_RidgeDual(benchmark::State& state) {
  const rp::CenteredData c = dataset(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(rp::ridge_weights_dual(c.X_tilde, c.w_tilde, 0.1));
}
BENCHMARK(BM_RidgeDual)->Args({400, 200})->Args({1000, 500})->Unit(benchmark::kMillisecond);

void BM_GenerateClean(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rp::generate_clean({500, 5000, 1}));
}
BENCHMARK(BM_GenerateClean)->Unit(benchmark::kMillisecond);

void BM_WoodburyRank3(benchmark::State& state) {
  const auto p = state.range(0);
  const Eigen::MatrixXd X = rp::generate_clean({std::uint64_t(p), std::uint64_t(2 * p), 2}).X;
  const auto Q0 = rp::InverseAction::from_matrix(rp::feature_resolvent(X, -0.5));
  const Eigen::VectorXd a = Eigen::VectorXd::Unit(p, 0);
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(2 * p, 1.0 / std::sqrt(2.0 * p));
  const rp::SpikeFactors f = rp::spike_factors(X, a, b, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(rp::woodbury_update(Q0, f.U, f.V));
}
BENCHMARK(BM_WoodburyRank3)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_FeatureResolvent(benchmark::State& state) {
  const auto p = state.range(0);
  const Eigen::MatrixXd Z = rp::generate_clean({std::uint64_t(p), std::uint64_t(2 * p), 3}).X;
  for (auto _ : state) benchmark::DoNotOptimize(rp::feature_resolvent(Z, -0.5));
}
BENCHMARK(BM_FeatureResolvent)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
