#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "csg/canonical.hpp"
#include "csg/causet.hpp"

namespace csg {

/// Levels of the growth tree blow up super-exponentially; the cap
/// guards against accidental requests and is overridable per tree.
inline constexpr int kDefaultLevelCap = 12;

/// All naturally labelled n-element causets, in lexicographic order of
/// their past-row encoding, with parent links into level n-1 and the
/// (varpi, m) statistics of the transition that created each node.
struct LevelCatalog {
  static constexpr std::uint32_t kNoParent = 0xffffffffu;

  int level = 0;
  std::size_t count = 0;
  std::vector<std::uint64_t> past_rows;        // count * level words
  std::vector<std::uint32_t> parent;           // kNoParent at level 1
  std::vector<std::uint8_t> varpi;             // precursor-set size
  std::vector<std::uint8_t> maximal_count;     // maximal elements in it
  std::vector<CanonicalKey> iso_key;

  std::span<const std::uint64_t> node_rows(std::size_t i) const {
    return {past_rows.data() + i * static_cast<std::size_t>(level),
            static_cast<std::size_t>(level)};
  }
  LabelledCauset node(std::size_t i) const;

  /// Binary search over the (sorted) node encodings.
  std::optional<std::size_t> find(const LabelledCauset& c) const;

  /// Positions of the distinguished extremal nodes.
  std::size_t antichain_index() const;
  std::size_t chain_index() const;
};

/// Memoizing enumerator for the tree of labelled causal sets. Level 1
/// is the single root; each next level is generated parent by parent
/// with children sorted by precursor mask, which makes every catalog
/// lexicographically sorted and the node order reproducible.
///
/// Catalogs returned by level() are immutable, address-stable and safe
/// to share across threads; growing new levels is not itself
/// thread-safe.
class GrowthTree {
public:
  explicit GrowthTree(int level_cap = kDefaultLevelCap, int threads = 1);

  const LevelCatalog& level(int n);

  int level_cap() const noexcept { return level_cap_; }
  int max_level_built() const noexcept {
    return static_cast<int>(levels_.size());
  }
  void set_threads(int threads);

private:
  void grow();

  int level_cap_;
  int threads_;
  std::vector<std::unique_ptr<LevelCatalog>> levels_;
};

/// Catalog export: one JSON object per line,
/// {"n":..,"index":..,"parent":..,"past":[[..],..],"iso_key":"hex"}.
/// parent is -1 at the root level.
void write_catalog_jsonl(const LevelCatalog& cat, std::ostream& os);

/// CSV export with the same fields; past sets are hex words joined by
/// ';' in element order.
void write_catalog_csv(const LevelCatalog& cat, std::ostream& os);

} // namespace csg
