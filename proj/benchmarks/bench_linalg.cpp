#include <benchmark/benchmark.h>

#include "latgeo/matrix.hpp"
#include "latgeo/sampling.hpp"

using namespace latgeo;

namespace {

std::vector<Matrix> inputs(int d, FieldKind kind) {
  Sampler s(17, kind);
  std::vector<Matrix> out;
  for (int i = 0; i < 64; ++i) out.push_back(s.random_rank_matrix(d, d));
  return out;
}

void BM_ColumnNF(benchmark::State& state) {
  const auto mats = inputs(static_cast<int>(state.range(0)), FieldKind::Rational);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(column_nf(mats[i++ % mats.size()]));
}
BENCHMARK(BM_ColumnNF)->DenseRange(2, 8, 2);

void BM_DivisionFreeWNF(benchmark::State& state) {
  const auto mats = inputs(static_cast<int>(state.range(0)), FieldKind::Rational);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(column_wnf_division_free(mats[i++ % mats.size()]));
}
BENCHMARK(BM_DivisionFreeWNF)->DenseRange(2, 8, 2);

void BM_ColumnNFGaussian(benchmark::State& state) {
  const auto mats = inputs(static_cast<int>(state.range(0)), FieldKind::Gaussian);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(column_nf(mats[i++ % mats.size()]));
}
BENCHMARK(BM_ColumnNFGaussian)->DenseRange(2, 6, 2);

}  // namespace
