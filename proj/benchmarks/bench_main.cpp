#include "tmep/chebyshev.hpp"
#include "tmep/critical.hpp"
#include "tmep/designer.hpp"
#include "tmep/dos.hpp"
#include "tmep/transfer.hpp"
#include "tmep/verify.hpp"

#include <benchmark/benchmark.h>

using namespace tmep;

namespace {

LatticeModel model_of_range(int n) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(n));
  return random_model(rng, n);
}

void BM_ColleagueRoots(benchmark::State& state) {
  const auto m = model_of_range(static_cast<int>(state.range(0)));
  const auto p = dispersion_polynomial(m, 0.3);
  const std::vector<double> c(p.chebyshev().begin(), p.chebyshev().end());
  for (auto _ : state) {
    benchmark::DoNotOptimize(cheb::colleague_roots(c));
  }
}
BENCHMARK(BM_ColleagueRoots)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_SpectrumViaDispersion(benchmark::State& state) {
  const auto m = model_of_range(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum_via_dispersion(m, 0.3));
  }
}
BENCHMARK(BM_SpectrumViaDispersion)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_SpectrumDirect(benchmark::State& state) {
  const auto m = model_of_range(static_cast<int>(state.range(0)));
  const auto t = build_transfer(m, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum_direct(t));
  }
}
BENCHMARK(BM_SpectrumDirect)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_FindCriticalPoints(benchmark::State& state) {
  const auto m = model_of_range(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_critical_points(m));
  }
}
BENCHMARK(BM_FindCriticalPoints)->Arg(3)->Arg(6)->Arg(12);

void BM_DispersionSamples(benchmark::State& state) {
  const LatticeModel m({1.0, 37.0 / 40.0, 0.3});
  const double k_step = 2.0 * kPi / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(DispersionSamples(m, k_step));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DispersionSamples)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_Density(benchmark::State& state) {
  const LatticeModel m({1.0, 37.0 / 40.0, 0.3});
  const DispersionSamples s(m);
  double mu = -4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.density(mu, 1e-4));
    mu = mu > 5.0 ? -4.0 : mu + 1e-3;
  }
}
BENCHMARK(BM_Density);

void BM_DesignEven(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(design_even_ep({n, 2 * n, Location::zone_edge, {}}));
  }
}
BENCHMARK(BM_DesignEven)->Arg(3)->Arg(6);

void BM_DesignInterior(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(design_odd_ep({3, 3, Location::interior, {{3, 0.25}}}));
  }
}
BENCHMARK(BM_DesignInterior)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
