#include <benchmark/benchmark.h>

#include <random>

#include "hermitangent/unitary_orbit.hpp"

using namespace hermitangent;

namespace {

HermitianVariety variety_b(const FieldTower& t, std::size_t n) {
  return HermitianVariety(t, hermitian_rescale(t, canonical_matrix_b(t, n))->matrix);
}

void BM_FieldMul(benchmark::State& state) {
  const FieldTower t = FieldTower::make(static_cast<std::uint32_t>(state.range(0)), 1);
  const Field& f = t.fq2();
  Element acc = Field::one();
  std::uint32_t c = 1;
  for (auto _ : state) {
    acc = f.mul(acc, Element{c});
    if (acc == Field::zero()) acc = Field::one();
    c = c + 1 == f.size() ? 1 : c + 1;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_FieldMul)->Arg(5)->Arg(31);

void BM_Pullback(benchmark::State& state) {
  const FieldTower t = FieldTower::make(7, 1);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const HermitianVariety x = variety_b(t, n);
  const RationalNormalCurve gamma0 = RationalNormalCurve::canonical(n);
  for (auto _ : state) benchmark::DoNotOptimize(pullback(t, gamma0, x));
}
BENCHMARK(BM_Pullback)->Arg(2)->Arg(3);

void BM_TangencyCheck(benchmark::State& state) {
  const FieldTower t = FieldTower::make(static_cast<std::uint32_t>(state.range(0)), 1);
  const HermitianVariety x = variety_b(t, 2);
  std::mt19937_64 rng(1);
  const RationalNormalCurve curve(t.fq2(), random_unitary(t, x.matrix(), rng));
  for (auto _ : state) benchmark::DoNotOptimize(total_tangency_check(t, curve, x));
}
BENCHMARK(BM_TangencyCheck)->Arg(5)->Arg(7);

void BM_Orbit25(benchmark::State& state) {
  const FieldTower t = FieldTower::make(5, 1);
  const HermitianVariety x = variety_b(t, 2);
  std::mt19937_64 rng(1);
  const std::vector<SqMatrix> gens{random_unitary(t, x.matrix(), rng), random_unitary(t, x.matrix(), rng)};
  OrbitOptions options;
  options.verify_all = state.range(0) != 0;
  for (auto _ : state) {
    const OrbitResult r = orbit_enumerate(t, x, RationalNormalCurve::canonical(2), gens, options);
    benchmark::DoNotOptimize(r.curves.size());
  }
}
BENCHMARK(BM_Orbit25)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
