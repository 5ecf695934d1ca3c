#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "csg/canonical.hpp"
#include "csg/catalog.hpp"
#include "oracles.hpp"

using namespace csg;
using namespace csg::testing;

TEST_CASE("the three order-isomorphic 3-element nodes share one key") {
  // 2-chain plus an unrelated element, in its three natural labellings
  const auto a = LabelledCauset::from_past_rows({0, 0, 0b01});
  const auto b = LabelledCauset::from_past_rows({0, 0, 0b10});
  const auto c = LabelledCauset::from_past_rows({0, 0b01, 0});
  CHECK(canonical_form(a) == canonical_form(b));
  CHECK(canonical_form(b) == canonical_form(c));
  CHECK(canonical_form(a) != canonical_form(LabelledCauset::chain(3)));
  CHECK(canonical_form(a) != canonical_form(LabelledCauset::antichain(3)));
}

TEST_CASE("chains and antichains never collide") {
  for (int n = 2; n <= 8; ++n)
    CHECK(canonical_form(LabelledCauset::chain(n)) !=
          canonical_form(LabelledCauset::antichain(n)));
}

TEST_CASE("keys are invariant under every natural relabelling") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = random_causet(2 + trial % 5, rng); // n <= 6
    const CanonicalKey key = canonical_form(c);
    for (const auto& order : linear_extensions(c))
      CHECK(canonical_form(relabel(c, order)) == key);
  }
}

TEST_CASE("the canonical representative is itself a natural labelling") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = random_causet(1 + trial % 7, rng);
    const CanonicalKey key = canonical_form(c);
    const auto representative = LabelledCauset::from_past_rows(key.rows());
    CHECK(canonical_form(representative) == key);
  }
}

TEST_CASE("keys separate distinct unlabelled posets at small n") {
  // nodes of one level keyed equal must have identical ideal stats
  GrowthTree tree;
  for (int n = 2; n <= 5; ++n) {
    const LevelCatalog& cat = tree.level(n);
    std::map<CanonicalKey, std::multiset<std::pair<int, int>>> stats;
    for (std::size_t i = 0; i < cat.count; ++i) {
      std::multiset<std::pair<int, int>> s;
      for (const Ideal& p : order_ideals(cat.node(i)))
        s.insert({p.varpi, p.maximal_count});
      auto [it, fresh] = stats.try_emplace(cat.iso_key[i], s);
      if (!fresh) CHECK(it->second == s);
    }
  }
}

TEST_CASE("distinct same-size structures get distinct keys") {
  const auto v = LabelledCauset::from_past_rows({0, 0, 0b11});    // join
  const auto wedge = LabelledCauset::from_past_rows({0, 1, 1});   // fork
  CHECK(canonical_form(v) != canonical_form(wedge));
}

TEST_CASE("hex serialization is fixed width and injective on keys") {
  const auto k1 = canonical_form(LabelledCauset::chain(4));
  const auto k2 = canonical_form(LabelledCauset::antichain(4));
  CHECK(k1.hex().size() == 64);
  CHECK(k2.hex().size() == 64);
  CHECK(k1.hex() != k2.hex());
}

TEST_CASE("worst-case symmetric inputs stay fast") {
  // the exchangeability cut keeps the antichain search linear
  const auto key = canonical_form(LabelledCauset::antichain(12));
  CHECK(key.rows() == std::vector<std::uint64_t>(12, 0));
  // disjoint union of three 4-chains
  std::vector<std::uint64_t> rows;
  for (int block = 0; block < 3; ++block)
    for (int i = 0; i < 4; ++i) {
      std::uint64_t row = 0;
      for (int j = 0; j < i; ++j)
        row |= std::uint64_t{1} << (block * 4 + j);
      rows.push_back(row);
    }
  const auto forest = LabelledCauset::from_past_rows(rows);
  const auto forest_key = canonical_form(forest);
  CHECK(forest_key.size() == 12);
}
