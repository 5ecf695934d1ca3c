#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "csg/catalog.hpp"
#include "csg/causet.hpp"
#include "csg/couplings.hpp"

namespace csg {

/// Hard ceiling on sampled causet sizes: each stage draws
/// categorically over all order ideals of the current causet, which is
/// exponential in its size by construction.
inline constexpr int kMaxSampleSize = 24;

/// Configuration of a classical sequential-growth simulation: a
/// directed random walk down the growth tree under real positive
/// couplings. Sample index i always draws from stream (seed, i), so
/// results are independent of thread count.
struct SampleConfig {
  Couplings couplings;
  int target_size = 1;
  std::uint64_t count = 1;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Throws UnsupportedDynamics unless every coupling lies on the
/// positive real axis (complex couplings admit no probabilities).
void require_real_positive(const Couplings& c);

/// q_0..q_(n-1): the real classical coupling sequence q_j = 1/lambda(j,0).
std::vector<double> classical_q_sequence(const Couplings& c, int n);

/// Transition probabilities for each ideal of c under the classical
/// formula. Verifies the Markov sum to 1e-12 and normalizes the
/// residual; never renormalizes past that tolerance.
std::vector<double> stage_probabilities(std::span<const double> q,
                                        const LabelledCauset& c,
                                        std::span<const Ideal> ideals);

/// One sampled causet of cfg.target_size elements from stream
/// (cfg.seed, sample_index).
LabelledCauset sample_causet(const SampleConfig& cfg,
                             std::uint64_t sample_index = 0);

/// Frequencies over the level-n nodes from cfg.count samples.
struct FrequencyTable {
  int level = 1;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  std::vector<double> frequencies() const;
};

FrequencyTable empirical_frequencies(GrowthTree& tree, const SampleConfig& cfg,
                                     int level);

} // namespace csg
