// Serial reference kernels against their pruned/parallel counterparts.
#include <benchmark/benchmark.h>

#include "specreg/harness.hpp"
#include "specreg/noise.hpp"
#include "specreg/pseudospec.hpp"

using namespace specreg;

namespace {

DenseMatrix instance(int n) {
  return DenseMatrix::jordan(static_cast<std::size_t>(n)) +
         0.3 * sample_gn(NoiseLaw(LawKind::RealGaussian), static_cast<std::size_t>(n), 1);
}

void BM_VolumeReference(benchmark::State& state) {
  const auto m = instance(6);
  const auto region = GridRegion::disc({}, 2.5, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pseudospectrum_volume_reference(m, region, 0.05));
}
BENCHMARK(BM_VolumeReference)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_VolumePruned(benchmark::State& state) {
  const auto m = instance(6);
  const auto region = GridRegion::disc({}, 2.5, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pseudospectrum_volume(m, region, 0.05));
}
BENCHMARK(BM_VolumePruned)->Arg(128)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_SvTailTrials(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::SvTail;
  cfg.n = 10;
  cfg.trials = 2000;
  const RunOptions opts{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(run_sv_tail(cfg, opts));
}
BENCHMARK(BM_SvTailTrials)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
