#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wavelink/coherence.hpp"
#include "wavelink/contagion.hpp"
#include "wavelink/dependence.hpp"
#include "wavelink/longmemory.hpp"
#include "wavelink/modwt.hpp"

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<double> x(n);
  for (auto& v : x) v = dist(rng);
  return x;
}

void BM_Modwt(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 1);
  const auto f = wavelink::build_filter("LA8");
  for (auto _ : state) benchmark::DoNotOptimize(wavelink::modwt(x, 6, f, wavelink::BoundaryMode::Periodic));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Modwt)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_MraReconstruct(benchmark::State& state) {
  const auto f = wavelink::build_filter("LA8");
  const auto d = wavelink::modwt(noise(static_cast<std::size_t>(state.range(0)), 2), 6, f,
                                 wavelink::BoundaryMode::Periodic);
  for (auto _ : state) benchmark::DoNotOptimize(wavelink::mra_reconstruct(d));
}
BENCHMARK(BM_MraReconstruct)->Arg(4096)->Arg(1 << 14);

void BM_WaveletCorrelation(benchmark::State& state) {
  const auto f = wavelink::build_filter("LA8");
  const auto a = wavelink::modwt(noise(4096, 3), 8, f, wavelink::BoundaryMode::Brickwall);
  const auto b = wavelink::modwt(noise(4096, 4), 8, f, wavelink::BoundaryMode::Brickwall);
  for (auto _ : state) benchmark::DoNotOptimize(wavelink::wavelet_correlation(a, b));
}
BENCHMARK(BM_WaveletCorrelation);

void BM_Wmc(benchmark::State& state) {
  const auto f = wavelink::build_filter("LA8");
  std::vector<wavelink::Decomposition> decs;
  for (int i = 0; i < state.range(0); ++i)
    decs.push_back(wavelink::modwt(noise(4096, 10 + static_cast<std::uint64_t>(i)), 8, f,
                                   wavelink::BoundaryMode::Brickwall));
  for (auto _ : state) benchmark::DoNotOptimize(wavelink::wmc(decs));
}
BENCHMARK(BM_Wmc)->Arg(4)->Arg(12);

void BM_Coherence(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = noise(n, 5), y = noise(n, 6);
  const wavelink::MorletParams params;
  for (auto _ : state) benchmark::DoNotOptimize(wavelink::wavelet_coherence(x, y, params));
}
BENCHMARK(BM_Coherence)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_CoherenceSignificance(benchmark::State& state) {
  const auto x = noise(512, 7), y = noise(512, 8);
  const wavelink::MorletParams params;
  const auto field = wavelink::wavelet_coherence(x, y, params);
  wavelink::SignificanceOptions opt;
  opt.n_surrogates = 100;
  opt.threads = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(wavelink::significance_montecarlo(x, y, params, {}, field, opt));
}
BENCHMARK(BM_CoherenceSignificance)->Unit(benchmark::kMillisecond);

void BM_SynthFgn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wavelink::synth_fgn(0.7, n, 9));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SynthFgn)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_Logscale(benchmark::State& state) {
  const auto x = wavelink::synth_fgn(0.7, 4096, 10);
  for (auto _ : state) benchmark::DoNotOptimize(wavelink::logscale_diagram(x, 2, 8));
}
BENCHMARK(BM_Logscale);

void BM_RollingCorrelation(benchmark::State& state) {
  const auto x = noise(2048, 11), y = noise(2048, 12);
  wavelink::RollingOptions o;
  o.step = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wavelink::rolling_wavelet_correlation(x, y, o));
}
BENCHMARK(BM_RollingCorrelation)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_RollingHurst(benchmark::State& state) {
  const auto x = wavelink::synth_fgn(0.6, 4096, 13);
  for (auto _ : state) benchmark::DoNotOptimize(wavelink::rolling_hurst(x));
}
BENCHMARK(BM_RollingHurst)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
