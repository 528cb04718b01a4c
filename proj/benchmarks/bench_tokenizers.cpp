#include <benchmark/benchmark.h>

#include <map>

#include "sptok/sptok.hpp"

namespace {

const sptok::EventStream& driving_scene(std::uint64_t duration_ms) {
  static std::map<std::uint64_t, sptok::EventStream> cache;
  auto it = cache.find(duration_ms);
  if (it == cache.end()) {
    sptok::PatchActivitySpec spec;
    spec.duration_us = duration_ms * 1000;
    spec.seed = 7;
    it = cache.emplace(duration_ms, sptok::generate_patch_activity(spec)).first;
  }
  return it->second;
}

void BM_SpikingPatches(benchmark::State& state) {
  const auto& stream = driving_scene(2000);
  sptok::TokenizerConfig cfg;
  cfg.threshold = static_cast<double>(state.range(0));
  cfg.refractory_us = static_cast<sptok::Micros>(state.range(1)) * 1000;
  for (auto _ : state) {
    auto tokens = sptok::tokenize_stream(cfg, stream);
    benchmark::DoNotOptimize(tokens.tokens.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * stream.size()));
}
BENCHMARK(BM_SpikingPatches)->Args({256, 0})->Args({250, 100})->Args({25, 0})->Args({1, 0})->Unit(benchmark::kMillisecond);

void BM_Discrete(benchmark::State& state) {
  const auto& stream = driving_scene(2000);
  sptok::TokenizerConfig cfg;
  cfg.variant = sptok::Variant::discrete;
  cfg.t_max_us = static_cast<sptok::Micros>(state.range(0)) * 1000;
  for (auto _ : state) benchmark::DoNotOptimize(sptok::tokenize_stream(cfg, stream).tokens.data());
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * stream.size()));
}
BENCHMARK(BM_Discrete)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_Voxelize(benchmark::State& state) {
  const auto& stream = driving_scene(2000);
  const sptok::VoxelConfig cfg{16, 50'000, 1};
  for (auto _ : state) benchmark::DoNotOptimize(sptok::voxelize(stream, cfg).tokens.data());
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * stream.size()));
}
BENCHMARK(BM_Voxelize)->Unit(benchmark::kMillisecond);

void BM_StackedHistogram(benchmark::State& state) {
  const auto& stream = driving_scene(500);
  const auto tokens = sptok::tokenize_stream(sptok::TokenizerConfig{}, stream);
  for (auto _ : state) benchmark::DoNotOptimize(sptok::histogram_batch(tokens.tokens, 16).data());
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * tokens.size()));
}
BENCHMARK(BM_StackedHistogram)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
