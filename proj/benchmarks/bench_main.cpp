#include <benchmark/benchmark.h>

#include "bhd/colored_noise.hpp"
#include "bhd/pointing.hpp"
#include "bhd/random.hpp"
#include "bhd/spectral.hpp"

namespace {

void BM_Welch(benchmark::State& state) {
  const auto lines = static_cast<std::size_t>(state.range(0));
  const double span = 1000.0;
  const double fs = 4.0 * span;
  const std::size_t avg = 100;
  const std::size_t n = bhd::welch_required_samples(fs, span, lines, avg);
  const bhd::TimeSeries x(bhd::gaussian_samples(n, 1.0, 1), fs);
  for (auto _ : state) benchmark::DoNotOptimize(bhd::welch_psd(x, span, lines, avg, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_Welch)->Arg(200)->Arg(800)->Arg(1600);

void BM_ColoredNoise(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto psd = bhd::NoisePsd::rin_anchored(1e4, 10.0, 1000.0);
  for (auto _ : state) benchmark::DoNotOptimize(bhd::synthesize_samples(psd, n, 4000.0, 7));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_ColoredNoise)->Arg(1 << 16)->Arg(321600)->Arg(1 << 20);

void BM_MapResponse(benchmark::State& state) {
  const auto nodes = static_cast<std::size_t>(state.range(0));
  const auto map = bhd::PhotodiodeMap::synthetic(nodes, nodes, 15e-6, 0.99, 0.005, 100e-6, 3);
  const bhd::BeamProfile beam{500e-6, 20e-6, -10e-6, 1e-3};
  for (auto _ : state) benchmark::DoNotOptimize(bhd::pointing_coefficient(map, beam));
}
BENCHMARK(BM_MapResponse)->Arg(101)->Arg(201);

}  // namespace

BENCHMARK_MAIN();
