#include <benchmark/benchmark.h>

#include "gausscond/linalg.hpp"

#include <random>

using namespace gausscond;

namespace {

PsdMatrix random_psd(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Matrix l(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) l(i, j) = gauss(rng);
  return PsdMatrix(Matrix(l * l.transpose()));
}

}  // namespace

static void BM_Pinv(benchmark::State& state) {
  PsdMatrix m = random_psd(state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pinv(m));
  }
}
BENCHMARK(BM_Pinv)->Arg(8)->Arg(32)->Arg(64);

static void BM_ConditionGaussian(benchmark::State& state) {
  Eigen::Index n = state.range(0);
  PsdMatrix joint = random_psd(n, 2);
  Vector mu = Vector::Zero(n);
  Eigen::Index keep = n / 2;
  Vector obs = Vector::Zero(n - keep);
  for (auto _ : state) {
    benchmark::DoNotOptimize(condition_gaussian(mu, joint, keep, obs));
  }
}
BENCHMARK(BM_ConditionGaussian)->Arg(8)->Arg(32)->Arg(64);

static void BM_RrefTransform(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  Eigen::Index n = state.range(0);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = gauss(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rref_transform(m));
  }
}
BENCHMARK(BM_RrefTransform)->Arg(8)->Arg(32)->Arg(64);
