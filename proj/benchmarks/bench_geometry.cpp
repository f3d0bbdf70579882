#include <benchmark/benchmark.h>

#include "latgeo/frames.hpp"
#include "latgeo/plucker.hpp"
#include "latgeo/sampling.hpp"

using namespace latgeo;

namespace {

void BM_PluckerOf(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0)), k = d / 2;
  Sampler s(5);
  const Matrix m = s.rank_matrix(d, k, k);
  for (auto _ : state) benchmark::DoNotOptimize(plucker::plucker_of(m, k));
}
BENCHMARK(BM_PluckerOf)->DenseRange(2, 8, 2);

void BM_RecoverMatrix(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0)), k = d / 2;
  Sampler s(6);
  const auto r = plucker::plucker_of(s.rank_matrix(d, k, k), k);
  for (auto _ : state) benchmark::DoNotOptimize(plucker::recover_matrix(r));
}
BENCHMARK(BM_RecoverMatrix)->DenseRange(2, 8, 2);

void BM_FrameRingOp(benchmark::State& state) {
  const FormConstants a = FormConstants::parse("1,2,1");
  const frames::Frame f = frames::frame_from_basis(identity(3), a, FieldKind::Gaussian);
  const auto ops = frames::ring_term_ops(f);
  const LatticeTerm& t = state.range(0) == 0 ? ops.add : state.range(0) == 1 ? ops.mult : ops.star;
  const LatticeSpace space = LatticeSpace::make(3, FieldKind::Gaussian, a);
  const auto u = frames::frame_assignment(f, {frames::ring_encode(Scalar(2, 1), f), frames::ring_encode(Scalar(-3), f)});
  for (auto _ : state) benchmark::DoNotOptimize(eval_term(t, u, space));
  state.SetLabel(state.range(0) == 0 ? "add" : state.range(0) == 1 ? "mult" : "star");
}
BENCHMARK(BM_FrameRingOp)->DenseRange(0, 2);

}  // namespace
