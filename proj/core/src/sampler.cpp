#include "csg/sampler.hpp"

#include <cmath>
#include <string>

#include "csg/accumulate.hpp"
#include "csg/complex_literal.hpp"
#include "csg/errors.hpp"
#include "csg/parallel.hpp"
#include "csg/philox.hpp"

namespace csg {
namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kNegativeFloor = -1e-9;

} // namespace

void require_real_positive(const Couplings& c) {
  if (!c.all_real_positive())
    throw UnsupportedDynamics(
        "classical sampling needs real positive couplings (" + c.describe() +
        " has complex phases, so transitions have no probabilities)");
}

std::vector<double> classical_q_sequence(const Couplings& c, int n) {
  require_real_positive(c);
  std::vector<double> q;
  q.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) q.push_back(q_from_t(c, j).real());
  return q;
}

std::vector<double> stage_probabilities(std::span<const double> q,
                                        const LabelledCauset& c,
                                        std::span<const Ideal> ideals) {
  std::vector<double> p;
  p.reserve(ideals.size());
  CompensatedSum sum;
  for (const Ideal& ideal : ideals) {
    double prob = classical_prob(q, c.size(), ideal.varpi, ideal.maximal_count);
    if (prob < 0.0) {
      if (prob <= kNegativeFloor)
        throw InternalConsistencyError("transition probability " +
                                       format_double(prob) + " below zero");
      prob = 0.0;
    }
    p.push_back(prob);
    sum.add(prob);
  }
  const double total = sum.value();
  if (std::abs(total - 1.0) > kSumTolerance)
    throw InternalConsistencyError(
        "stage probabilities sum to " + format_double(total) +
        "; refusing to renormalize beyond 1e-12");
  for (double& v : p) v /= total;
  return p;
}

namespace {

LabelledCauset sample_one(std::span<const double> q, int target,
                          RngStream& rng) {
  LabelledCauset current = LabelledCauset::singleton();
  while (current.size() < target) {
    const auto ideals = order_ideals(current);
    const auto probs = stage_probabilities(q, current, ideals);
    const double u = rng.next_double();
    double acc = 0.0;
    std::size_t pick = probs.size() - 1; // guards the u ~ 1 edge
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    current = extend(current, ideals[pick]);
  }
  return current;
}

} // namespace

LabelledCauset sample_causet(const SampleConfig& cfg,
                             std::uint64_t sample_index) {
  if (cfg.target_size < 1 || cfg.target_size > kMaxSampleSize)
    throw ConfigError(
        "sample target size must lie in [1, " +
        std::to_string(kMaxSampleSize) +
        "]: each stage draws over every order ideal of the current causet");
  const auto q = classical_q_sequence(cfg.couplings, cfg.target_size);
  RngStream rng(cfg.seed, sample_index);
  return sample_one(q, cfg.target_size, rng);
}

std::vector<double> FrequencyTable::frequencies() const {
  std::vector<double> f;
  f.reserve(counts.size());
  for (std::uint64_t c : counts)
    f.push_back(total ? static_cast<double>(c) / static_cast<double>(total)
                      : 0.0);
  return f;
}

FrequencyTable empirical_frequencies(GrowthTree& tree, const SampleConfig& cfg,
                                     int level) {
  if (level < 1 || level > cfg.target_size)
    throw ConfigError("frequency level must lie in [1, target_size]");
  const LevelCatalog& cat = tree.level(level);
  const auto q = classical_q_sequence(cfg.couplings, level);

  FrequencyTable table;
  table.level = level;
  table.counts.assign(cat.count, 0);
  table.total = cfg.count;

  const int workers = resolve_threads(cfg.threads);
  std::vector<std::vector<std::uint64_t>> partial(
      static_cast<std::size_t>(workers),
      std::vector<std::uint64_t>(cat.count, 0));

  parallel_chunks(cfg.count, cfg.threads,
                  [&](std::size_t w, std::size_t lo, std::size_t hi) {
                    auto& counts = partial[w];
                    for (std::size_t s = lo; s < hi; ++s) {
                      RngStream rng(cfg.seed, s);
                      const LabelledCauset sample =
                          sample_one(q, level, rng);
                      const auto idx = cat.find(sample);
                      if (!idx)
                        throw InternalConsistencyError(
                            "sampled causet missing from the level catalog");
                      ++counts[*idx];
                    }
                  });

  for (const auto& counts : partial)
    for (std::size_t i = 0; i < counts.size(); ++i)
      table.counts[i] += counts[i];
  return table;
}

} // namespace csg
