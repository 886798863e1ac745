#include <benchmark/benchmark.h>

#include "wallx/polynomial.hpp"
#include "wallx/ratfunc.hpp"

using namespace wallx;

static void BM_poly_mul(benchmark::State& state) {
  int nv = 4;
  Poly a(nv), b(nv);
  for (int i = 0; i < nv; ++i) {
    a += Poly::var(nv, i, Rat(i + 1));
    b += Poly::var(nv, i, Rat(2 * i + 1));
  }
  Poly p = a;
  for (int i = 0; i < 4; ++i) p = p * a + b;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p * p);
  }
}
BENCHMARK(BM_poly_mul);

static void BM_ratfunc_sum_reduce(benchmark::State& state) {
  int nv = 4;
  Poly x = Poly::var(nv, 0), y = Poly::var(nv, 1);
  RatFunc f = RatFunc::from_poly(x * x - y * y) / RatFunc::from_poly(x - y);
  RatFunc g = RatFunc::from_poly(x + y);
  for (auto _ : state) {
    benchmark::DoNotOptimize((f - g).is_zero());
  }
}
BENCHMARK(BM_ratfunc_sum_reduce);

BENCHMARK_MAIN();
