#include "csg/catalog.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "csg/errors.hpp"
#include "csg/parallel.hpp"

namespace csg {

LabelledCauset LevelCatalog::node(std::size_t i) const {
  auto rows = node_rows(i);
  return LabelledCauset::from_past_rows(
      std::vector<std::uint64_t>(rows.begin(), rows.end()));
}

std::optional<std::size_t> LevelCatalog::find(const LabelledCauset& c) const {
  if (c.size() != level) return std::nullopt;
  auto target = c.rows();
  std::size_t lo = 0, hi = count;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    auto rows = node_rows(mid);
    auto cmp = std::lexicographical_compare_three_way(
        rows.begin(), rows.end(), target.begin(), target.end());
    if (cmp == std::strong_ordering::equal) return mid;
    if (cmp == std::strong_ordering::less)
      lo = mid + 1;
    else
      hi = mid;
  }
  return std::nullopt;
}

std::size_t LevelCatalog::antichain_index() const {
  auto idx = find(LabelledCauset::antichain(level));
  if (!idx)
    throw InternalConsistencyError("level catalog is missing the antichain");
  return *idx;
}

std::size_t LevelCatalog::chain_index() const {
  auto idx = find(LabelledCauset::chain(level));
  if (!idx)
    throw InternalConsistencyError("level catalog is missing the chain");
  return *idx;
}

GrowthTree::GrowthTree(int level_cap, int threads)
    : level_cap_(level_cap), threads_(resolve_threads(threads)) {
  if (level_cap_ < 1) throw ConfigError("level cap must be at least 1");
  if (level_cap_ > kMaxElements)
    throw ConfigError("level cap cannot exceed " +
                      std::to_string(kMaxElements));
}

void GrowthTree::set_threads(int threads) { threads_ = resolve_threads(threads); }

const LevelCatalog& GrowthTree::level(int n) {
  if (n < 1)
    throw ConfigError("levels are numbered from 1 (the one-element root)");
  if (n > level_cap_) throw LevelCapExceeded(n, level_cap_);
  while (static_cast<int>(levels_.size()) < n) grow();
  return *levels_[static_cast<std::size_t>(n - 1)];
}

void GrowthTree::grow() {
  const int n = static_cast<int>(levels_.size()) + 1;
  LevelCatalog cat;
  cat.level = n;

  if (n == 1) {
    cat.count = 1;
    cat.past_rows = {0};
    cat.parent = {LevelCatalog::kNoParent};
    cat.varpi = {0};
    cat.maximal_count = {0};
    cat.iso_key = {canonical_form(LabelledCauset::singleton())};
    levels_.push_back(std::make_unique<LevelCatalog>(std::move(cat)));
    return;
  }

  const LevelCatalog& prev = *levels_.back();

  // Children per parent, kept in per-chunk buffers and concatenated in
  // chunk order: parents are lexicographically sorted and children are
  // sorted by precursor mask, so the result is globally sorted and
  // independent of the thread count.
  struct Chunk {
    std::vector<std::uint64_t> rows;
    std::vector<std::uint32_t> parent;
    std::vector<std::uint8_t> varpi, mcount;
  };
  std::vector<Chunk> chunks(
      static_cast<std::size_t>(resolve_threads(threads_)));

  parallel_chunks(prev.count, threads_, [&](std::size_t w, std::size_t lo,
                                            std::size_t hi) {
    Chunk& out = chunks[w];
    for (std::size_t i = lo; i < hi; ++i) {
      const LabelledCauset parent_node = prev.node(i);
      for (const Ideal& p : order_ideals(parent_node)) {
        out.rows.insert(out.rows.end(), parent_node.rows().begin(),
                        parent_node.rows().end());
        out.rows.push_back(p.members);
        out.parent.push_back(static_cast<std::uint32_t>(i));
        out.varpi.push_back(static_cast<std::uint8_t>(p.varpi));
        out.mcount.push_back(static_cast<std::uint8_t>(p.maximal_count));
      }
    }
  });

  for (const Chunk& ch : chunks) {
    cat.past_rows.insert(cat.past_rows.end(), ch.rows.begin(), ch.rows.end());
    cat.parent.insert(cat.parent.end(), ch.parent.begin(), ch.parent.end());
    cat.varpi.insert(cat.varpi.end(), ch.varpi.begin(), ch.varpi.end());
    cat.maximal_count.insert(cat.maximal_count.end(), ch.mcount.begin(),
                             ch.mcount.end());
  }
  cat.count = cat.parent.size();

  cat.iso_key.resize(cat.count);
  parallel_chunks(cat.count, threads_,
                  [&](std::size_t, std::size_t lo, std::size_t hi) {
                    for (std::size_t i = lo; i < hi; ++i)
                      cat.iso_key[i] = canonical_form(cat.node(i));
                  });

  levels_.push_back(std::make_unique<LevelCatalog>(std::move(cat)));
}

namespace {

void append_past_json(std::string& out, std::span<const std::uint64_t> rows) {
  out += '[';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out += ',';
    out += '[';
    bool first = true;
    for (int j = 0; j < static_cast<int>(i); ++j)
      if ((rows[i] >> j) & 1u) {
        if (!first) out += ',';
        out += std::to_string(j);
        first = false;
      }
    out += ']';
  }
  out += ']';
}

} // namespace

void write_catalog_jsonl(const LevelCatalog& cat, std::ostream& os) {
  for (std::size_t i = 0; i < cat.count; ++i) {
    std::string line = "{\"n\":" + std::to_string(cat.level);
    line += ",\"index\":" + std::to_string(i);
    line += ",\"parent\":";
    line += (cat.parent[i] == LevelCatalog::kNoParent)
                ? "-1"
                : std::to_string(cat.parent[i]);
    line += ",\"past\":";
    append_past_json(line, cat.node_rows(i));
    line += ",\"iso_key\":\"" + cat.iso_key[i].hex() + "\"}";
    os << line << '\n';
  }
}

void write_catalog_csv(const LevelCatalog& cat, std::ostream& os) {
  os << "n,index,parent,past,iso_key\n";
  static constexpr char hexd[] = "0123456789abcdef";
  for (std::size_t i = 0; i < cat.count; ++i) {
    os << cat.level << ',' << i << ',';
    if (cat.parent[i] == LevelCatalog::kNoParent)
      os << -1;
    else
      os << cat.parent[i];
    os << ',';
    auto rows = cat.node_rows(i);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r) os << ';';
      for (int shift = 60; shift >= 0; shift -= 4)
        os << hexd[(rows[r] >> shift) & 0xF];
    }
    os << ',' << cat.iso_key[i].hex() << '\n';
  }
}

} // namespace csg
