#include <benchmark/benchmark.h>

#include "rootclose/closure.hpp"
#include "rootclose/fontaine.hpp"
#include "rootclose/witt.hpp"

using namespace rootclose;

namespace {

const TowerCtx kFamily(5, 0, 3, TowerMode::Quotient);

TowerElem r(std::uint32_t level) {
  const TowerCtx c = kFamily.at_level(level);
  return TowerElem::pi(c).pow(3) + TowerElem::x(c).pow(3) + TowerElem::y(c).pow(3);
}

void BM_TowerPow(benchmark::State& state) {
  const TowerElem e = r(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(e.pow(5));
}
BENCHMARK(BM_TowerPow)->Arg(1)->Arg(2);

void BM_Membership(benchmark::State& state) {
  const LocalElem c(r(static_cast<std::uint32_t>(state.range(0))), 1);
  for (auto _ : state) benchmark::DoNotOptimize(membership(c, 5));
}
BENCHMARK(BM_Membership)->Arg(1)->Arg(2);

void BM_WittIntMul(benchmark::State& state) {
  const WittCtx ctx(3, static_cast<std::size_t>(state.range(0)));
  std::vector<mpz_class> a(ctx.length(), 7), b(ctx.length(), -5);
  const WittVec<mpz_class> x(ctx, a), y(ctx, b);
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_WittIntMul)->Arg(2)->Arg(3);

void BM_WittFpAdd(benchmark::State& state) {
  const WittCtx ctx(2, static_cast<std::size_t>(state.range(0)));
  const auto one = WittVec<Fp>::one(ctx, Fp{2, 0});
  for (auto _ : state) benchmark::DoNotOptimize(one + one);
}
BENCHMARK(BM_WittFpAdd)->Arg(3)->Arg(4);

void BM_DivideEta(benchmark::State& state) {
  const Generators g = generators(kFamily, 3, ClosureMode::ClosureCerts);
  const FontaineElem eta = g.P.pow(3) + g.X.pow(3) + g.Y.pow(3);
  for (auto _ : state) benchmark::DoNotOptimize(divide_by_P(eta));
}
BENCHMARK(BM_DivideEta)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
