#include <benchmark/benchmark.h>

#include "gausscond/finlang.hpp"

#include <variant>

using namespace gausscond;

namespace {

FinProgram worked_example() {
  return std::get<FinProgram>(parse_fin(
      "let x = bernoulli(2/5) in let y = bernoulli(2/5) in x =:= y; x"));
}

}  // namespace

static void BM_FinEval(benchmark::State& state) {
  FinProgram prog = worked_example();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_term(prog.spaces, {}, prog.term, FinMode::P));
  }
}
BENCHMARK(BM_FinEval);

static void BM_ModelEvidence(benchmark::State& state) {
  FinProgram prog = worked_example();
  for (auto _ : state) {
    benchmark::DoNotOptimize(model_evidence(prog.spaces, prog.term));
  }
}
BENCHMARK(BM_ModelEvidence);

static void BM_KernelCompose(benchmark::State& state) {
  FinObj big = FinObj::base(make_space("grid", {"a", "b", "c", "d", "e", "f", "g", "h"}));
  SubKernel id = SubKernel::identity(big * big);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compose(id, id));
  }
}
BENCHMARK(BM_KernelCompose);
