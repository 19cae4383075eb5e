#include <benchmark/benchmark.h>

#include "qident/hyper.hpp"
#include "qident/identities.hpp"
#include "qident/qpochhammer.hpp"

using namespace qident;
using mp::PrecisionPolicy;
using mp::Scalar;

static void BM_QPochInfinite(benchmark::State& state) {
  long bits = state.range(0);
  qcore::QContext ctx(Scalar::of(0.9, bits), PrecisionPolicy(bits, 1e-30));
  Scalar a = Scalar::of(0.37, bits);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcore::qpoch_infinite(a, ctx));
  }
}
BENCHMARK(BM_QPochInfinite)->Arg(192)->Arg(384)->Arg(768);

static void BM_Basic2Phi1(benchmark::State& state) {
  long bits = state.range(0);
  qcore::QContext ctx(Scalar::of(0.8, bits), PrecisionPolicy(bits, 1e-30));
  hyper::BasicSeriesSpec spec{{ctx.scalar(0.45), ctx.scalar(1.7)},
                              {ctx.scalar(0.3)},
                              ctx.scalar(0.77)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hyper::eval_basic(spec, ctx));
  }
}
BENCHMARK(BM_Basic2Phi1)->Arg(192)->Arg(384);

static void BM_AlternatingAccel(benchmark::State& state) {
  PrecisionPolicy policy(192, 1e-30);
  auto make = [] {
    return hyper::stream_of([](long n) {
      Scalar t = 1 / mp::sqrt(Scalar::of_int(n + 1, 192));
      return (n % 2 == 0) ? t : -t;
    });
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hyper::sum_series(make, policy, hyper::SumMode::AlternatingAccel));
  }
}
BENCHMARK(BM_AlternatingAccel);

static void BM_Gamma(benchmark::State& state) {
  long bits = state.range(0);
  Scalar x = Scalar::of(7.25, bits);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mp::gamma(x));
  }
}
BENCHMARK(BM_Gamma)->Arg(192)->Arg(768);

static void BM_VerifyG2Point(benchmark::State& state) {
  ParamMap pt = ident::sample_point("G2", 3);
  PrecisionPolicy policy(192, 1e-34);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ident::evaluate("G2", pt, policy, 1e-30));
  }
}
BENCHMARK(BM_VerifyG2Point);

BENCHMARK_MAIN();
