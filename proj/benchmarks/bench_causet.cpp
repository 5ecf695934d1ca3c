#include <benchmark/benchmark.h>

#include <random>

#include "csg/canonical.hpp"
#include "csg/catalog.hpp"

namespace {

csg::LabelledCauset random_causet(int n, std::mt19937& rng) {
  csg::LabelledCauset c = csg::LabelledCauset::singleton();
  while (c.size() < n) {
    const auto ideals = csg::order_ideals(c);
    std::uniform_int_distribution<std::size_t> pick(0, ideals.size() - 1);
    c = csg::extend(c, ideals[pick(rng)]);
  }
  return c;
}

void BM_EnumerateLevel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    csg::GrowthTree tree;
    benchmark::DoNotOptimize(tree.level(n).count);
  }
}
BENCHMARK(BM_EnumerateLevel)->Arg(5)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_OrderIdeals(benchmark::State& state) {
  const auto c = csg::LabelledCauset::antichain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(csg::order_ideals(c).size());
}
BENCHMARK(BM_OrderIdeals)->Arg(8)->Arg(12)->Arg(16);

void BM_CanonicalFormRandom(benchmark::State& state) {
  std::mt19937 rng(12345);
  std::vector<csg::LabelledCauset> pool;
  for (int i = 0; i < 64; ++i)
    pool.push_back(random_causet(static_cast<int>(state.range(0)), rng));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(csg::canonical_form(pool[i % pool.size()]));
    ++i;
  }
}
BENCHMARK(BM_CanonicalFormRandom)->Arg(6)->Arg(8)->Arg(10);

void BM_CanonicalFormAntichain(benchmark::State& state) {
  const auto c = csg::LabelledCauset::antichain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(csg::canonical_form(c));
}
BENCHMARK(BM_CanonicalFormAntichain)->Arg(8)->Arg(12);

} // namespace
