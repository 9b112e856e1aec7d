// Compares the serial reference point sweep against the OpenMP kernel on
// the curvature-decomposition workload the verification suites run.

#include "kqch/families.hpp"
#include "kqch/invariants.hpp"
#include "kqch/sweep.hpp"
#include "kqch/verify.hpp"

#include <benchmark/benchmark.h>

using namespace kqch;

namespace {

struct Workload {
  MetricField field = potential_metric(radial_log1p(), 3);
  DistributionField dist = radial_distribution(field);
  std::vector<Vec> points = sample_points(field.domain, 6, 256, 77);
};

const Workload& workload() {
  static Workload w;
  return w;
}

void run_sweep(benchmark::State& state, Exec exec) {
  const Workload& w = workload();
  const std::size_t count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto out = map_indexed<double>(count, [&](std::size_t i) {
      const Tensor4 R = riemann(w.field, w.dist, w.points[i % w.points.size()]);
      return qch_decompose(R, 3).a;
    }, exec);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}

void BM_CurvatureSweepSerial(benchmark::State& state) { run_sweep(state, Exec::serial); }
void BM_CurvatureSweepParallel(benchmark::State& state) { run_sweep(state, Exec::parallel); }

}  // namespace

BENCHMARK(BM_CurvatureSweepSerial)->Arg(32)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurvatureSweepParallel)->Arg(32)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
