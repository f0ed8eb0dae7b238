#include <bellkit/inequality.hpp>
#include <bellkit/loophole_map.hpp>
#include <bellkit/montecarlo.hpp>
#include <bellkit/optimizer.hpp>

#include <benchmark/benchmark.h>

using namespace bellkit;

namespace {

const MeasurementArm kArm = MeasurementArm::with(0.99, 0.001, 0.8);

void BM_CoincidenceProbability(benchmark::State& st) {
  const EntangledState s{0.4, 0.3, 0.97};
  double t = 0.1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(coincidence_probability(s, kArm, kArm, t, 0.7));
    t += 1e-6;
  }
}
BENCHMARK(BM_CoincidenceProbability);

void BM_ChSum(benchmark::State& st) {
  const EntangledState s{0.4, 0.0, 1.0};
  const auto a = AngleSettings::from_degrees(72.24, 45.0, 17.76, 0.0);
  for (auto _ : st) benchmark::DoNotOptimize(ch_sum(s, kArm, kArm, a, ChMode::heralded));
}
BENCHMARK(BM_ChSum);

void BM_OptimizeAngles(benchmark::State& st) {
  OptimOptions o;
  o.canonicalize = st.range(0) != 0;
  for (auto _ : st)
    benchmark::DoNotOptimize(optimize_angles({0.4, 0.0, 1.0}, kArm, kArm, ChMode::heralded, o));
}
BENCHMARK(BM_OptimizeAngles)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ChOverN(benchmark::State& st) {
  OptimOptions o;
  o.canonicalize = false;
  for (auto _ : st) benchmark::DoNotOptimize(ch_over_n(0.4, 0.8, PolarizerChannel::ideal(), o));
}
BENCHMARK(BM_ChOverN)->Unit(benchmark::kMillisecond);

void BM_SimulateRun(benchmark::State& st) {
  RunConfig c;
  c.pair_rate = 1e5;
  c.duration_s = 1.0;
  c.coincidence_window_s = 1e-9;
  c.state = {0.4, 0.0, 1.0};
  c.arm1 = kArm;
  c.arm2 = kArm;
  c.settings = AngleSettings::from_degrees(72.7, 45.0, 17.3, 0.0);
  for (auto _ : st) {
    benchmark::DoNotOptimize(simulate_run(c));
    ++c.seed;
  }
}
BENCHMARK(BM_SimulateRun);

}  // namespace

BENCHMARK_MAIN();
