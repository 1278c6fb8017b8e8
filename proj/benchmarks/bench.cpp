#include <benchmark/benchmark.h>

#include <cmath>

#include "fsoqkd/oracle.hpp"
#include "fsoqkd/quadrature.hpp"
#include "fsoqkd/specfun.hpp"
#include "fsoqkd/transmission.hpp"

namespace {

using namespace fsoqkd;

const transmission::PointingParams kFig3{1e-8, 5e-8, 1e-6, 1e-5};

void BM_MarcumQ(benchmark::State& state) {
  const specfun::MarcumOrder m(0.5);
  double b = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::marcum_q(m, 3.0, b));
    b = b < 8.0 ? b + 0.01 : 0.5;
  }
}
BENCHMARK(BM_MarcumQ);

void BM_HermiteRule(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(quadrature::gauss_hermite(n));
}
BENCHMARK(BM_HermiteRule)->Arg(30)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LegendreRule(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(quadrature::gauss_legendre(n));
}
BENCHMARK(BM_LegendreRule)->Arg(110)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_TplrGhq(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto rule = quadrature::cached_rule(quadrature::QuadratureKind::Hermite, n);
  for (auto _ : state) benchmark::DoNotOptimize(transmission::tplr_ghq(kFig3, 1e-10, *rule));
}
BENCHMARK(BM_TplrGhq)->Arg(30)->Arg(300)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_TpreGhq(benchmark::State& state) {
  const auto rule = quadrature::cached_rule(quadrature::QuadratureKind::Hermite, 300);
  for (auto _ : state)
    benchmark::DoNotOptimize(transmission::tpre_ghq(kFig3, 1.68e-10, 3.6e-11, 1e-6, *rule));
}
BENCHMARK(BM_TpreGhq)->Unit(benchmark::kMicrosecond);

void BM_TpreRayleighLegendre(benchmark::State& state) {
  const double s = std::sqrt(1e-11);
  for (auto _ : state)
    benchmark::DoNotOptimize(transmission::tpre_rayleigh_quadrature(s, 1e-11, 2e-12, 1e-6));
}
BENCHMARK(BM_TpreRayleighLegendre)->Unit(benchmark::kMicrosecond);

void BM_McTplr(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(oracle::mc_tplr(kFig3, 1e-10, seed++, n, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_McTplr)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
