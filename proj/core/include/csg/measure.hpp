#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "csg/catalog.hpp"
#include "csg/couplings.hpp"

namespace csg {

/// An element of the event algebra in fine-partition form: a disjoint
/// union of level-n cylinder sets, named by their node indices.
struct Event {
  int level = 1;
  std::vector<std::uint32_t> members; // strictly ascending
};

/// Validates indices against the level size, sorts and deduplicates.
Event make_event(int level, std::vector<std::uint32_t> members,
                 std::size_t level_count);

/// Colinearity defects of one level: zeta per node, the extrema with
/// their positions, and the level sum S_n of measure magnitudes.
struct ZetaRow {
  int level = 0;
  std::vector<double> zeta;
  double zeta_max = 0.0;
  double zeta_min = 0.0;
  std::size_t argmax = 0; // first index attaining the max
  std::size_t argmin = 0;
  double s_n = 1.0;
};

/// zeta of a single node: sum over its transitions of
/// |lambda(varpi,m)| / |lambda(n,0)| minus 1, clamped at zero.
/// Independent of any catalog, so it works at sizes past the
/// enumeration cap.
double node_zeta(const LabelledCauset& c, const Couplings& couplings);

/// Quantum measures of cylinder sets and finite events for one
/// coupling family over one growth tree.
///
/// Node measures are products of transition amplitudes along the
/// branch from the root; they are computed level by level through the
/// parent links and cached, so repeated sweeps are table lookups.
/// Cached rows are immutable once built; growing the caches (the first
/// call for a new level) is not safe to run concurrently.
class MeasureEngine {
public:
  MeasureEngine(GrowthTree& tree, Couplings couplings, int threads = 1);

  GrowthTree& tree() noexcept { return tree_; }
  const Couplings& couplings() const noexcept { return couplings_; }
  void set_threads(int threads);

  /// Cached per-node measures of one level, ascending node index.
  std::span<const std::complex<double>> level_measures(int n);

  std::complex<double> node_measure(int n, std::size_t index);

  /// Finitely additive event measure; members are summed in ascending
  /// index order with compensated summation.
  std::complex<double> event_measure(const Event& e);

  ZetaRow level_zeta(int n);

  /// S_1..S_n_max, S_n = sum over level-n nodes of |measure|.
  std::vector<double> s_n_series(int n_max);

  /// Lambda table extended to at least level n, rebuilt as needed.
  const LambdaTable& lambda_table(int n);

private:
  GrowthTree& tree_;
  Couplings couplings_;
  int threads_;
  LambdaTable table_;
  std::vector<std::vector<std::complex<double>>> measures_; // per level
};

/// Per-node zeta report rows for levels 1..n_max:
/// n,node_index,iso_key,zeta,abs_measure,re_measure,im_measure
void write_zeta_csv(MeasureEngine& engine, int n_max, std::ostream& os);

/// Per-level summary: zeta extrema, whether the antichain/chain attain
/// them, and S_n.
nlohmann::json zeta_summary_json(MeasureEngine& engine, int n_max);

} // namespace csg
