#include <array>

#include <benchmark/benchmark.h>

#include "bai/engine.hpp"
#include "bai/oracle.hpp"
#include "bai/rng.hpp"
#include "bai/specfn.hpp"
#include "bai/stats.hpp"
#include "bai/thresholds.hpp"

namespace {

namespace th = bai::thresholds;

const bai::model::Instance kStandard{{1.0, 0.85, 0.8, 0.7, 0.65}, {1.0, 0.6, 0.5, 0.4, 0.35}};

std::array<bai::stats::ArmStats, 2> two_arms(std::int64_t t) {
  bai::rng::Stream rng(1);
  std::array<bai::stats::ArmStats, 2> arms;
  for (std::int64_t i = 0; i < t; ++i) {
    arms[i % 2].push(rng.normal(i % 2 ? -0.2 : 0.0, i % 2 ? 0.5 : 1.0));
  }
  return arms;
}

void BM_OracleUnknown(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bai::oracle::optimal_allocation_unknown(kStandard));
}
BENCHMARK(BM_OracleUnknown);

void BM_OracleKnown(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bai::oracle::optimal_allocation_known(kStandard));
}
BENCHMARK(BM_OracleKnown);

void BM_CubicRoots(benchmark::State& state) {
  double c = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bai::specfn::cubic_real_roots(-1.3, c, -0.2));
    c += 1e-9;
  }
}
BENCHMARK(BM_CubicRoots);

void BM_StudentQuantile(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bai::specfn::student_quantile_upper(1e-6, 99));
}
BENCHMARK(BM_StudentQuantile);

void BM_GlrReport(benchmark::State& state) {
  bai::rng::Stream rng(3);
  std::vector<bai::stats::ArmStats> arms(5);
  for (std::size_t a = 0; a < 5; ++a) {
    for (int i = 0; i < 200; ++i) arms[a].push(rng.normal(kStandard.means[a], kStandard.variances[a]));
  }
  for (auto _ : state) benchmark::DoNotOptimize(bai::stats::glr_report(arms));
}
BENCHMARK(BM_GlrReport);

template <th::Family F>
void BM_Threshold(benchmark::State& state) {
  const auto arms = two_arms(state.range(0));
  const auto spec = th::ThresholdSpec::make(F, 0.01, 2);
  for (auto _ : state) benchmark::DoNotOptimize(th::threshold(spec, arms[0], arms[1], state.range(0)));
}
BENCHMARK_TEMPLATE(BM_Threshold, th::Family::Student)->Arg(5000);
BENCHMARK_TEMPLATE(BM_Threshold, th::Family::Box)->Arg(5000);
BENCHMARK_TEMPLATE(BM_Threshold, th::Family::KL)->Arg(5000);
BENCHMARK_TEMPLATE(BM_Threshold, th::Family::BoB)->Arg(500)->Arg(5000);

void BM_Episode(benchmark::State& state) {
  bai::engine::RunConfig rc;
  rc.instance = kStandard;
  rc.sampler = static_cast<bai::samplers::SamplerKind>(state.range(0));
  rc.threshold = th::ThresholdSpec::make(th::Family::Heuristic, 0.1, 5);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    rc.seed = seed++;
    benchmark::DoNotOptimize(bai::engine::run_episode(rc));
  }
}
BENCHMARK(BM_Episode)->DenseRange(0, 6)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
