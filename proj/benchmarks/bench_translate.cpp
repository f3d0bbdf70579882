#include <benchmark/benchmark.h>

#include "latgeo/gauss.hpp"
#include "latgeo/homog.hpp"
#include "latgeo/sampling.hpp"

using namespace latgeo;

namespace {

void BM_TraceTranslate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const FormConstants a = FormConstants::ones(d);
  const auto phi = parse_lattice_formula("x1 + x2 = x3' && x1 & x2 != 0");
  gauss::Options opt;
  opt.d = d;
  Sampler s(3);
  std::vector<std::vector<Matrix>> cases;
  for (int i = 0; i < 32; ++i) cases.push_back({s.random_rank_matrix(d, d), s.random_rank_matrix(d, d),
                                                s.random_rank_matrix(d, d)});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gauss::eval_translated(phi.formula, cases[i++ % cases.size()], a, opt));
  }
}
BENCHMARK(BM_TraceTranslate)->DenseRange(2, 5);

void BM_FullTranslate(benchmark::State& state) {
  const auto phi = parse_lattice_formula("x1 + x2 = x2 + x1");
  gauss::Options opt;
  opt.d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gauss::translate_formula(phi.formula, FormConstants::ones(opt.d), opt));
  }
}
BENCHMARK(BM_FullTranslate)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_HomogTranslate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto phi = parse_lattice_formula("x3 = x1 + x2' && x1 != x2");
  const FormConstants a = FormConstants::ones(d);
  for (auto _ : state) benchmark::DoNotOptimize(homog::homog_translate(phi, {1, d - 1, 2}, a));
}
BENCHMARK(BM_HomogTranslate)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

}  // namespace
