#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>

#include "csg/measure.hpp"
#include "csg/sampler.hpp"
#include "csg/errors.hpp"
#include "oracles.hpp"

using namespace csg;
using namespace csg::testing;

namespace {

Couplings dust() { return Couplings::explicit_list({{1, 0}}); }
Couplings forest() { return Couplings::explicit_list({{1, 0}, {1, 0}}); }

} // namespace

TEST_CASE("complex couplings are rejected up front") {
  const SampleConfig cfg{Couplings::explicit_list({{1, 0}, {0, 1}}), 4, 10, 1,
                         1};
  CHECK_THROWS_AS(sample_causet(cfg), UnsupportedDynamics);
}

TEST_CASE("dust grows the antichain with certainty") {
  const SampleConfig cfg{dust(), 6, 1, 2024, 1};
  for (std::uint64_t s = 0; s < 200; ++s)
    CHECK(sample_causet(cfg, s) == LabelledCauset::antichain(6));
}

TEST_CASE("forest dynamics grows forests") {
  const SampleConfig cfg{forest(), 8, 1, 555, 1};
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const LabelledCauset c = sample_causet(cfg, s);
    for (int i = 0; i < c.size(); ++i)
      CHECK(std::popcount(links_below(c, i)) <= 1);
  }
}

TEST_CASE("identical configs give identical sample streams") {
  const SampleConfig cfg{Couplings::percolation({0.6, 0.0}), 7, 1, 99, 1};
  for (std::uint64_t s = 0; s < 50; ++s)
    CHECK(sample_causet(cfg, s) == sample_causet(cfg, s));
}

TEST_CASE("stage probabilities sum to one over every node") {
  std::mt19937 rng(101);
  const Couplings perc = Couplings::percolation({0.45, 0.0});
  const auto q = classical_q_sequence(perc, 8);
  for (int trial = 0; trial < 30; ++trial) {
    const LabelledCauset c = random_causet(1 + trial % 7, rng);
    const auto ideals = order_ideals(c);
    const auto probs = stage_probabilities(q, c, ideals);
    double sum = 0.0;
    for (double p : probs) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("stage-1 percolation frequencies: antichain gets q") {
  GrowthTree tree;
  const double q = 0.7;
  const SampleConfig cfg{Couplings::percolation({q, 0.0}), 2, 20000, 7, 2};
  const FrequencyTable table = empirical_frequencies(tree, cfg, 2);
  REQUIRE(table.counts.size() == 2);
  const auto freq = table.frequencies();
  const std::size_t anti = tree.level(2).antichain_index();
  const std::size_t chain = tree.level(2).chain_index();
  const double sigma = std::sqrt(q * (1 - q) / double(cfg.count));
  CHECK(std::abs(freq[anti] - q) < 4 * sigma);
  CHECK(std::abs(freq[chain] - (1 - q)) < 4 * sigma);
  CHECK(freq[anti] + freq[chain] == doctest::Approx(1.0));
}

TEST_CASE("level-3 frequencies match the exact measure by chi-squared") {
  GrowthTree tree;
  for (double q : {0.3, 0.7}) {
    const Couplings perc = Couplings::percolation({q, 0.0});
    const SampleConfig cfg{perc, 3, 100000, 31337, 4};
    const FrequencyTable table = empirical_frequencies(tree, cfg, 3);
    MeasureEngine engine(tree, perc);
    auto measures = engine.level_measures(3);

    double chi2 = 0.0;
    for (std::size_t i = 0; i < table.counts.size(); ++i) {
      const double expected = measures[i].real() * double(cfg.count);
      REQUIRE(expected > 5.0);
      const double diff = double(table.counts[i]) - expected;
      chi2 += diff * diff / expected;
    }
    const double p = chi_squared_pvalue(chi2, int(table.counts.size()) - 1);
    CHECK(p > 0.001);
  }
}

TEST_CASE("frequency tables are independent of the thread count") {
  GrowthTree tree;
  SampleConfig cfg{forest(), 5, 4000, 11, 1};
  const FrequencyTable seq = empirical_frequencies(tree, cfg, 5);
  cfg.threads = 4;
  const FrequencyTable par = empirical_frequencies(tree, cfg, 5);
  CHECK(seq.counts == par.counts);
  CHECK(seq.total == par.total);
}

TEST_CASE("input validation") {
  const SampleConfig cfg{dust(), 4, 10, 0, 1};
  GrowthTree tree;
  CHECK_THROWS_AS(empirical_frequencies(tree, cfg, 5), ConfigError);
  CHECK_THROWS_AS(empirical_frequencies(tree, cfg, 0), ConfigError);
  SampleConfig bad = cfg;
  bad.target_size = 0;
  CHECK_THROWS_AS(sample_causet(bad), ConfigError);
}
