#include <benchmark/benchmark.h>

#include "csg/measure.hpp"
#include "csg/sampler.hpp"
#include "csg/variation.hpp"

namespace {

const csg::Couplings& complex_perc() {
  static const csg::Couplings c = csg::Couplings::percolation({0.5, 0.2});
  return c;
}

void BM_LevelMeasures(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  csg::GrowthTree tree;
  tree.level(n);
  for (auto _ : state) {
    csg::MeasureEngine engine(tree, complex_perc());
    benchmark::DoNotOptimize(engine.level_measures(n).size());
  }
}
BENCHMARK(BM_LevelMeasures)->Arg(5)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_LevelZeta(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  csg::GrowthTree tree;
  tree.level(n);
  csg::MeasureEngine engine(tree, complex_perc());
  for (auto _ : state) benchmark::DoNotOptimize(engine.level_zeta(n).zeta_max);
}
BENCHMARK(BM_LevelZeta)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_SweepDouble(benchmark::State& state) {
  const csg::Couplings c = csg::Couplings::single_k(2, 1.0, 1.2);
  csg::PrecisionOpts p;
  p.mode = csg::PrecisionOpts::Mode::Double;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        csg::sweep_zeta(c, static_cast<int>(state.range(0)), p).u_a.back());
}
BENCHMARK(BM_SweepDouble)->Arg(4096)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SweepExtended(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        csg::sweep_zeta(complex_perc(), static_cast<int>(state.range(0)))
            .u_c.back());
}
BENCHMARK(BM_SweepExtended)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(csg::classify(complex_perc()).status);
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

void BM_SampleCauset(benchmark::State& state) {
  const csg::SampleConfig cfg{csg::Couplings::percolation({0.6, 0.0}),
                              static_cast<int>(state.range(0)), 1, 7, 1};
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(csg::sample_causet(cfg, i).size());
    ++i;
  }
}
BENCHMARK(BM_SampleCauset)->Arg(8)->Arg(12);

} // namespace

BENCHMARK_MAIN();
