#include <benchmark/benchmark.h>

#include "gausscond/denote.hpp"
#include "gausscond/interp.hpp"
#include "gausscond/normal_form.hpp"
#include "gausscond/parser.hpp"
#include "gausscond/randomwalk.hpp"

#include <variant>

using namespace gausscond;

namespace {

TermPtr noisy_measurement() {
  return std::get<TermPtr>(parse("x = normal(50, 100)\nnormal(x, 25) =:= 40\nx"));
}

TermPtr two_normals() {
  return std::get<TermPtr>(
      parse("let (x,y) = (normal(), normal()) in x =:= y; x + y"));
}

}  // namespace

static void BM_RunNoisyMeasurement(benchmark::State& state) {
  TermPtr t = noisy_measurement();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(t));
  }
}
BENCHMARK(BM_RunNoisyMeasurement);

static void BM_DenoteEval(benchmark::State& state) {
  TermPtr t = two_normals();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_state(denote({}, t)));
  }
}
BENCHMARK(BM_DenoteEval);

static void BM_Canonicalize(benchmark::State& state) {
  Channel c = denote({{"a", Ty::real()}, {"b", Ty::real()}},
                     std::get<TermPtr>(parse("a =:= normal(b, 4); (a + b, a - b)")));
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonicalize(c));
  }
}
BENCHMARK(BM_Canonicalize);

static void BM_NormalizeClosed(benchmark::State& state) {
  AlgTerm a = to_alg({}, two_normals());
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize_closed(a));
  }
}
BENCHMARK(BM_NormalizeClosed);

static void BM_RandomWalk(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  std::map<int, double> obs = {{n / 4, 1.0}, {n / 2, -0.5}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_walk_posterior(n, obs));
  }
}
BENCHMARK(BM_RandomWalk)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
