#include <benchmark/benchmark.h>

#include "paralat/calculus.hpp"
#include "paralat/diffusion.hpp"
#include "paralat/stochastic.hpp"

using namespace paralat;

static void BM_ForwardFFT(benchmark::State& state) {
  auto t = build_torus(square_basis(2), 4, static_cast<int>(state.range(0)));
  NoiseSpec spec;
  spec.seed = 7;
  Field f = sample_noise(spec, t);
  for (auto _ : state) benchmark::DoNotOptimize(forward(f));
}
BENCHMARK(BM_ForwardFFT)->Arg(64)->Arg(128)->Arg(256);

static void BM_Paraproduct(benchmark::State& state) {
  auto t = build_torus(square_basis(2), 4, static_cast<int>(state.range(0)));
  auto pou = build_partition(t);
  NoiseSpec spec;
  spec.seed = 7;
  Field f = sample_noise(spec, t);
  spec.seed = 8;
  Field g = sample_noise(spec, t);
  for (auto _ : state) benchmark::DoNotOptimize(paraproduct(f, g, pou));
}
BENCHMARK(BM_Paraproduct)->Arg(64)->Arg(128);

static void BM_EtdStep(benchmark::State& state) {
  auto t = build_torus(square_basis(2), 4, static_cast<int>(state.range(0)));
  auto mu = simple_random_walk(2);
  auto etd = etd_propagators(mu, t, 1e-3);
  NoiseSpec spec;
  spec.seed = 7;
  Field u = sample_noise(spec, t);
  for (auto _ : state) {
    SpectralField uhat = forward(u);
    for (std::int64_t m = 0; m < uhat.size(); ++m)
      uhat[m] = etd.prop[m] * uhat[m] + etd.src[m] * uhat[m];
    benchmark::DoNotOptimize(inverse(uhat));
  }
}
BENCHMARK(BM_EtdStep)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
