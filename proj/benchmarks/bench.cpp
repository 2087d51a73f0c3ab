#include <benchmark/benchmark.h>

#include "weylscan/run.hpp"

using namespace weylscan;

namespace {

void BM_weyl_eval(benchmark::State &state) {
  const TripleModel model = random_triple_model(1, int(state.range(0)), 2);
  const Complex lambda(0.3, 0.7);
  for (auto _ : state)
    benchmark::DoNotOptimize(model.weyl(lambda));
}
BENCHMARK(BM_weyl_eval)->Arg(4)->Arg(8)->Arg(16);

void BM_m_half(benchmark::State &state) {
  const Potential q = Potential::square_well(10.0, 1.0);
  const Complex lambda(-2.0, 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(m_half(q, Side::plus, lambda));
}
BENCHMARK(BM_m_half);

void BM_mode_weyl(benchmark::State &state) {
  RadialOperator op;
  op.q = Potential({{0.0, 1.0, {-12.0}}}, 1.0);
  op.R = 1.0;
  const Complex lambda(2.0, 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(M_mode(op, int(state.range(0)), lambda));
}
BENCHMARK(BM_mode_weyl)->Arg(0)->Arg(4)->Arg(8);

void BM_boundary_limit(benchmark::State &state) {
  const MeasureModel mu({{0.5, 1.0}}, {{1.0, 2.0, {1.0}}});
  auto f = [&](Complex z) { return borel_transform(mu, z); };
  for (auto _ : state)
    benchmark::DoNotOptimize(boundary_limit(f, 1.5));
}
BENCHMARK(BM_boundary_limit);

void BM_scan_matrix_model(benchmark::State &state) {
  const TripleModel model = random_triple_model(2, 6, 2);
  WeylProvider p;
  p.id = "bench";
  p.dim = 2;
  p.eval = [&](Complex z) { return model.weyl(z); };
  const double lo = model.eigenvalues().minCoeff() - 0.5;
  const double hi = model.eigenvalues().maxCoeff() + 0.5;
  for (auto _ : state)
    benchmark::DoNotOptimize(scan_interval(p, lo, hi, 0.05));
}
BENCHMARK(BM_scan_matrix_model);

} // namespace

BENCHMARK_MAIN();
